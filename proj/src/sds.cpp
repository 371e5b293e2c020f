#include "canlink/sds.hpp"

#include <algorithm>
#include <sstream>

#include "canlink/binforms.hpp"
#include "canlink/errors.hpp"

namespace canlink::sds {

namespace {

struct Slot {
    const char* name;
    int degree;
};

// Coefficient slots of the generic sextic, degree = subscript.
const std::vector<Slot>& slots() {
    static const std::vector<Slot> s = {
        {"xi_2", 2}, {"a_0", 0}, {"a_1", 1}, {"a_2", 2}, {"a_3", 3},
        {"b_0", 0},  {"b_1", 1}, {"b_2", 2}, {"b_3", 3}, {"b_4", 4},
        {"c_0", 0},  {"c_1", 1}, {"c_2", 2}, {"c_3", 3}, {"c_4", 4}, {"c_5", 5},
        {"d_0", 0},  {"d_1", 1}, {"d_2", 2}, {"d_3", 3}, {"d_4", 4}, {"d_5", 5}, {"d_6", 6},
    };
    return s;
}

// Derived symbols with their declared degrees. The generic q, r, s, e carry
// the degree pattern of family 7.2; every condition image is weighted
// homogeneous under any consistent choice.
const std::vector<Slot>& derived_symbols() {
    static const std::vector<Slot> s = {
        {"q", 1},   {"r", 1},   {"s", 2},   {"e", 3},
        {"r_2", 2}, {"s_3", 3}, {"e_2", 2},
        {"q_1", 1}, {"r_1", 1}, {"s_2", 2}, {"e_3", 3},
        {"q_2", 2}, {"s_1", 1}, {"e_4", 4},
        {"q_3", 3}, {"e_5", 5},
        {"A_0", 0}, {"B_1", 1}, {"B_0", 0},
    };
    return s;
}

const char* kGenericF =
    "-w^2 + x^4*t^2 + x^4*xi_2"
    " + x^3*(4*t^3*a_0 + 4*t^2*a_1 + 2*t*a_2 + a_3)"
    " + x^2*(2*t^4*b_0 + 2*t^3*b_1 + 2*t^2*b_2 + 2*t*b_3 + b_4)"
    " + x*(2*t^5*c_0 + 2*t^4*c_1 + 2*t^3*c_2 + 2*t^2*c_3 + 2*t*c_4 + c_5)"
    " + t^6*d_0 + 2*t^5*d_1 + t^4*d_2 + 2*t^3*d_3 + t^2*d_4 + 2*t*d_5 + d_6";

} // namespace

TablePtr ring() {
    static TablePtr t = [] {
        std::vector<std::string> names = {"x", "y", "z", "t", "w"};
        for (const auto& s : slots()) names.push_back(s.name);
        for (const auto& s : derived_symbols()) names.push_back(s.name);
        return VarTable::make(std::move(names));
    }();
    return t;
}

const Weighting& grading() {
    static const Weighting w = [] {
        TablePtr t = ring();
        Weighting g(t->size(), 1);
        g[t->index_of("w")] = 3;
        for (const auto& s : slots()) g[t->index_of(s.name)] = s.degree;
        for (const auto& s : derived_symbols()) g[t->index_of(s.name)] = s.degree;
        return g;
    }();
    return w;
}

TablePtr geometry_table() {
    static TablePtr t = VarTable::make({"x", "y", "z", "t", "w"});
    return t;
}

TablePtr binary_table() {
    static TablePtr t = VarTable::make({"y", "z"});
    return t;
}

Poly generic_f() {
    static const Poly f = [] {
        Poly g = parse_poly(kGenericF, ring());
        if (!g.is_homogeneous(grading(), 6))
            throw InternalCheckError("generic sextic fails its grading check");
        return g;
    }();
    return f;
}

TablePtr expanded_table() {
    static TablePtr t = [] {
        std::vector<std::string> names = {"x", "y", "z", "t", "w"};
        for (const auto& s : slots()) {
            if (s.degree == 0) {
                names.push_back(s.name);
            } else {
                for (int i = 0; i <= s.degree; ++i)
                    names.push_back(std::string(s.name) + "_" + std::to_string(i));
            }
        }
        return VarTable::make(std::move(names));
    }();
    return t;
}

Poly generic_f_expanded() {
    static const Poly f = [] {
        TablePtr ext = expanded_table();
        std::size_t y = ext->index_of("y"), z = ext->index_of("z");
        std::map<std::string, Poly> images;
        for (const auto& s : slots()) {
            if (s.degree == 0) continue;
            Poly form = Poly::zero(ext);
            for (int i = 0; i <= s.degree; ++i) {
                Poly coeff = Poly::variable(ext, ext->index_of(std::string(s.name) + "_" +
                                                               std::to_string(i)));
                form = form + coeff * Poly::variable(ext, y, s.degree - i) *
                                  Poly::variable(ext, z, i);
            }
            images.emplace(s.name, form);
        }
        std::map<std::size_t, Poly> by_index;
        TablePtr r = ring();
        for (auto& [name, img] : images) by_index.emplace(r->index_of(name), img);
        return generic_f().substituted(by_index);
    }();
    return f;
}

FamilyId parse_family(const std::string& text) {
    FamilyId id;
    auto dot = text.find('.');
    try {
        id.n = std::stoi(text.substr(0, dot));
        if (dot != std::string::npos) id.sub = std::stoi(text.substr(dot + 1));
    } catch (const std::exception&) {
        throw PreconditionError("bad family id '" + text + "'");
    }
    if (id.n < 1 || id.n > 8 || (id.n == 7 && (id.sub < 1 || id.sub > 4)) ||
        (id.n != 7 && id.sub != 0))
        throw PreconditionError("bad family id '" + text + "' (need 1..8, subfamily only for 7)");
    return id;
}

std::vector<FamilyId> all_families() {
    std::vector<FamilyId> out;
    for (int n = 1; n <= 8; ++n) {
        if (n == 7)
            for (int s = 1; s <= 4; ++s) out.push_back({7, s});
        else
            out.push_back({n, 0});
    }
    return out;
}

namespace {

SubstitutionStep step(const std::string& label, std::map<std::string, std::string> images) {
    return SubstitutionStep{label, std::move(images)};
}

const SubstitutionStep& condition(int k) {
    static const std::vector<SubstitutionStep> steps = {
        step("2", {{"xi_2", "0"}}),
        step("3", {{"a_3", "0"}}),
        step("4", {{"b_4", "a_2^2"}}),
        step("5", {{"c_5", "2*a_2*b_3 - 4*a_1*a_2^2"}}),
        step("6", {{"d_6", "2*a_2*c_4 + b_3^2 - 8*a_1*a_2*b_3 - 2*a_2^2*b_2 + 4*a_0*a_2^3 + "
                           "16*a_1^2*a_2^2"}}),
        step("7", {{"a_2", "q*r"},
                   {"b_3", "q*s + 4*a_1*q*r"},
                   {"c_4", "2*a_1*q*s - 6*a_0*q^2*r^2 + 8*a_1^2*q*r + e*r"},
                   {"d_5", "2*b_2*q*s - 8*a_1^2*q*s - e*s - b_1*q^2*r^2 + c_3*q*r"}}),
        step("8", {{"e_2", "4*A_0*r_2 + b_2 - 6*a_1^2"},
                   {"c_3", "6*a_0*s_3 - 4*A_0*s_3 + 4*a_0*a_1*r_2 - 8*A_0*a_1*r_2 + B_1*r_2 + "
                           "2*a_1*b_2 - 4*a_1^3"},
                   {"d_4", "-2*s_3*B_1 + 16*r_2^2*A_0^2 - 8*b_2*r_2*A_0 + 16*a_1^2*r_2*A_0 + "
                           "4*b_1*s_3 - 8*a_0*a_1*s_3 - 2*b_0*r_2^2 + 2*c_2*r_2 + b_2^2 - "
                           "4*a_1^2*b_2 + 4*a_1^4"}}),
    };
    return steps.at(k - 2);
}

const SubstitutionStep& subfamily(int sub) {
    static const std::vector<SubstitutionStep> steps = {
        step("7.1", {{"q", "1"}, {"r", "r_2"}, {"s", "s_3"}, {"e", "e_2"}}),
        step("7.2", {{"q", "q_1"}, {"r", "r_1"}, {"s", "s_2"}, {"e", "e_3"}}),
        step("7.3", {{"q", "q_2"}, {"r", "1"}, {"s", "s_1"}, {"e", "e_4"}}),
        step("7.4", {{"q", "q_3"}, {"r", "0"}, {"s", "1"}, {"e", "e_5"}}),
    };
    return steps.at(sub - 1);
}

} // namespace

std::vector<SubstitutionStep> condition_steps(const FamilyId& id) {
    std::vector<SubstitutionStep> out;
    for (int k = 2; k <= std::min(id.n, 6); ++k) out.push_back(condition(k));
    if (id.n >= 7) {
        out.push_back(condition(7));
        out.push_back(subfamily(id.n == 8 ? 1 : id.sub));
    }
    if (id.n >= 8) out.push_back(condition(8));
    return out;
}

std::vector<SubstitutionStep> extended_steps(int upto) {
    if (upto < 9 || upto > 12) throw PreconditionError("extended conditions cover 9..12");
    static const std::vector<SubstitutionStep> steps = {
        step("9", {{"A_0", "a_0"},
                   {"B_1", "b_1"},
                   {"d_3", "-s_3*B_0 + 2*b_0*s_3 - 2*a_0^2*s_3 + c_1*r_2 - 4*a_0*b_1*r_2 + "
                           "16*a_0^2*a_1*r_2 + b_1*b_2 - 4*a_0*a_1*b_2 - 2*a_1^2*b_1 + "
                           "8*a_0*a_1^3"},
                   {"c_2", "r_2*B_0 - 6*a_0^2*r_2 + 2*a_0*b_2 + 2*a_1*b_1 - 12*a_0*a_1^2"}}),
        step("10", {{"B_0", "b_0"},
                    {"d_2", "2*c_0*r_2 - 8*a_0*b_0*r_2 + 16*a_0^3*r_2 + 2*b_0*b_2 - "
                            "4*a_0^2*b_2 + b_1^2 - 8*a_0*a_1*b_1 - 4*a_1^2*b_0 + "
                            "24*a_0^2*a_1^2"},
                    {"c_1", "2*a_0*b_1 + 2*a_1*b_0 - 12*a_0^2*a_1"}}),
        step("11", {{"c_0", "2*a_0*b_0 - 4*a_0^3"},
                    {"d_1", "b_0*b_1 - 2*a_0^2*b_1 - 4*a_0*a_1*b_0 + 8*a_0^3*a_1"}}),
        step("12", {{"d_0", "b_0^2 - 4*a_0^2*b_0 + 4*a_0^4"}}),
    };
    std::vector<SubstitutionStep> out;
    for (int k = 9; k <= upto; ++k) out.push_back(steps.at(k - 9));
    return out;
}

Poly apply_steps(const Poly& f, const std::vector<SubstitutionStep>& steps) {
    Poly cur = f;
    for (const auto& s : steps) {
        std::map<std::size_t, Poly> images;
        for (const auto& [name, text] : s.images)
            images.emplace(cur.table()->index_of(name), parse_poly(text, cur.table()));
        cur = cur.substituted(images);
    }
    return cur;
}

Poly chart(const Poly& f) {
    TablePtr t = f.table();
    Poly w = Poly::variable(t, t->index_of("w"));
    Poly g = f + w * w;
    if (g.depends_on(t->index_of("w")))
        throw PreconditionError("sextic is not of the form -w^2 + (w-free part)");
    return g.substituted({{t->index_of("x"), Poly::constant(t, Rat(1))}});
}

Poly split_h(const Poly& f, std::int64_t k, std::size_t term_limit) {
    Poly g = chart(f);
    Weighting grad(g.table()->size(), 1);
    if (g.table()->same_as(*ring()))
        grad = grading();
    else if (g.table()->same_as(*expanded_table())) {
        // Expanded coefficient variables are weight 0.
        grad.assign(g.table()->size(), 0);
        for (const char* nm : {"x", "y", "z", "t"}) grad[g.table()->index_of(nm)] = 1;
        grad[g.table()->index_of("w")] = 3;
    } else {
        grad = g.table()->weights();
    }
    SplitEngine eng(g, g.table()->index_of("t"), grad);
    eng.set_term_limit(term_limit);
    return eng.h(k);
}

Poly residual_h(const FamilyId& id, std::int64_t k, bool override_guard,
                std::size_t term_limit) {
    if (!override_guard && k > id.n + 2)
        throw ResourceLimitError("residual degree " + std::to_string(k) + " beyond the n + 2 " +
                                 "cost guard for family " + id.str());
    Poly f = apply_steps(generic_f(), condition_steps(id));
    return split_h(f, k, term_limit);
}

int param_dim(const FamilyId& id) {
    // Free coefficients of a degree-j binary form: j + 1.
    auto dim = [](int degree) { return degree + 1; };
    int total = 0;
    for (const auto& s : slots()) total += dim(s.degree);
    if (id.n >= 2) total -= dim(2); // xi_2 = 0
    if (id.n >= 3) total -= dim(3); // a_3 = 0
    if (id.n >= 4) total -= dim(4); // b_4 determined
    if (id.n >= 5) total -= dim(5); // c_5 determined
    if (id.n >= 6) total -= dim(6); // d_6 determined
    if (id.n >= 7) {
        // a_2, b_3, c_4, d_5 replaced by q, r, s, e with one normalization.
        total -= dim(2) + dim(3) + dim(4) + dim(5);
        int sub = id.n == 8 ? 1 : id.sub;
        switch (sub) {
            case 1: total += 0 + dim(2) + dim(3) + dim(2); break;       // q = 1
            case 2: total += (dim(1) - 1) + dim(1) + dim(2) + dim(3); break; // q monic
            case 3: total += dim(2) + 0 + dim(1) + dim(4); break;       // r = 1
            case 4: total += dim(3) + 0 + 0 + dim(5); break;            // r = 0, s = 1
            default: throw PreconditionError("family 7 needs a subfamily");
        }
    }
    if (id.n >= 8) {
        // e_2, c_3, d_4 replaced by the scalar A_0 and the linear B_1.
        total -= dim(2) + dim(3) + dim(4);
        total += 1 + dim(1);
    }
    return total;
}

int expected_moduli_dim(const FamilyId& id) { return param_dim(id) - 10; }

Poly SDSCoefficients::get(const std::string& name) const {
    auto it = values.find(name);
    if (it != values.end()) return it->second;
    return Poly::zero(binary_table());
}

SDSCoefficients parse_family_file(const std::string& text) {
    SDSCoefficients out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto nonspace = line.find_first_not_of(" \t\r");
        if (nonspace == std::string::npos) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw PreconditionError("family file line " + std::to_string(lineno) +
                                    ": expected 'name = polynomial'");
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string name = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        bool known = false;
        for (const auto& s : slots()) known = known || name == s.name;
        for (const auto& s : derived_symbols()) known = known || name == s.name;
        if (!known)
            throw PreconditionError("family file line " + std::to_string(lineno) +
                                    ": unknown coefficient '" + name + "'");
        out.values.emplace(name, parse_poly(value, binary_table()));
    }
    return out;
}

Poly concrete_f(const SDSCoefficients& coeffs) {
    TablePtr geom = geometry_table();
    std::map<std::size_t, Poly> images;
    TablePtr r = ring();
    for (const auto& s : slots()) {
        Poly val = coeffs.get(s.name).on_table(geom);
        if (!val.is_zero() && !val.is_homogeneous(Weighting(geom->size(), 1), s.degree))
            throw PreconditionError(std::string("coefficient ") + s.name +
                                    " is not homogeneous of degree " + std::to_string(s.degree));
        images.emplace(r->index_of(s.name), val);
    }
    // Any remaining derived symbol must not appear in the generic sextic.
    return generic_f().substituted(images);
}

JacobianEval point_jacobian(const Poly& f, const std::vector<Poly>& point) {
    const TablePtr& t = f.table();
    if (point.size() != 5) throw PreconditionError("point must have 5 coordinates (x,y,z,t,w)");
    bool all_zero = true;
    for (const auto& c : point) all_zero = all_zero && c.is_zero();
    if (all_zero) throw PreconditionError("not a point of weighted projective space");
    std::map<std::size_t, Poly> at;
    const char* names[5] = {"x", "y", "z", "t", "w"};
    for (int i = 0; i < 5; ++i) at.emplace(t->index_of(names[i]), point[i]);
    JacobianEval out{
        f.substituted(at),
        f.derivative(t->index_of("x")).substituted(at),
        f.derivative(t->index_of("y")).substituted(at),
        f.derivative(t->index_of("z")).substituted(at),
        f.derivative(t->index_of("t")).substituted(at),
    };
    return out;
}

// ---- membership -------------------------------------------------------------

namespace {

// q, r, s, e of condition 7 recovered from concrete a_2, b_3, c_4, d_5.
struct QRSE {
    Poly q, r, s, e;
    int sub = 0;
    std::string failure; // non-empty when the decomposition is impossible
};

QRSE solve_condition7(const SDSCoefficients& c, int want_sub) {
    TablePtr bt = binary_table();
    Poly a2 = c.get("a_2"), b3 = c.get("b_3"), a1 = c.get("a_1");
    Poly c4 = c.get("c_4"), d5 = c.get("d_5"), b2 = c.get("b_2");
    Poly a0 = c.get("a_0"), b1 = c.get("b_1"), c3 = c.get("c_3");
    QRSE out;
    out.q = Poly::zero(bt);
    out.r = Poly::zero(bt);
    out.s = Poly::zero(bt);
    out.e = Poly::zero(bt);
    if (a2.is_zero() && b3.is_zero()) {
        out.failure = "a_2 = b_3 = 0 (no isolated cA_7 presentation, Lemma guard)";
        return out;
    }
    if (a2.is_zero()) {
        out.sub = 4; // r = 0, s = 1, q = b_3
        out.q = b3;
        out.s = Poly::constant(bt, Rat(1));
        // c_4 = 2 a_1 q; e = 2 b_2 q - 8 a_1^2 q - d_5
        Poly c4_expected = (a1 * out.q).scaled(Rat(2));
        if (c4 != c4_expected) {
            out.failure = "condition 7.4: c_4 != 2*a_1*q, witness " + (c4 - c4_expected).render();
            return out;
        }
        out.e = (b2 * out.q).scaled(Rat(2)) - (a1 * a1 * out.q).scaled(Rat(8)) - d5;
    } else {
        Poly g = b3.is_zero() ? a2 : binary_gcd(a2, b3);
        int qdeg = static_cast<int>(g.degree());
        out.sub = qdeg == 0 ? 1 : (qdeg == 1 ? 2 : 3);
        if (want_sub != 0) out.sub = want_sub;
        switch (out.sub) {
            case 1:
                out.q = Poly::constant(bt, Rat(1));
                out.r = a2;
                out.s = b3 - (a1 * a2).scaled(Rat(4));
                break;
            case 2:
                out.q = g;
                if (!a2.divisible_by(g) || !b3.divisible_by(g)) {
                    out.failure = "condition 7.2: gcd does not divide a_2 and b_3";
                    return out;
                }
                out.r = a2.divide_exact(g);
                out.s = b3.divide_exact(g) - (a1 * out.r).scaled(Rat(4));
                break;
            case 3:
                out.q = a2;
                out.r = Poly::constant(bt, Rat(1));
                if (!b3.divisible_by(a2)) {
                    out.failure = "condition 7.3: a_2 does not divide b_3";
                    return out;
                }
                out.s = b3.divide_exact(a2) - a1.scaled(Rat(4));
                break;
            default:
                out.failure = "condition 7: could not match a subfamily";
                return out;
        }
        // e from the c_4 equation: e r = c_4 - 2 a_1 q s + 6 a_0 q^2 r^2 - 8 a_1^2 q r.
        Poly er = c4 - (a1 * out.q * out.s).scaled(Rat(2)) +
                  (a0 * out.q * out.q * out.r * out.r).scaled(Rat(6)) -
                  (a1 * a1 * out.q * out.r).scaled(Rat(8));
        if (out.r.is_zero()) {
            out.failure = "condition 7: r vanished outside subfamily 7.4";
            return out;
        }
        if (er.is_zero()) {
            out.e = Poly::zero(bt);
        } else if (er.divisible_by(out.r)) {
            out.e = er.divide_exact(out.r);
        } else {
            out.failure = "condition 7: c_4 does not decompose, witness " + er.render();
            return out;
        }
    }
    return out;
}

// Expected degree pattern (q, r, s, e) per subfamily.
std::array<int, 4> subfamily_degrees(int sub) {
    switch (sub) {
        case 1: return {0, 2, 3, 2};
        case 2: return {1, 1, 2, 3};
        case 3: return {2, 0, 1, 4};
        default: return {3, -1, 0, 5}; // -1: r = 0, any degree
    }
}

bool degree_matches(const Poly& p, int expected) {
    if (expected < 0) return p.is_zero();
    return p.is_zero() || p.degree() == expected;
}

} // namespace

ConditionReport check_membership(const SDSCoefficients& coeffs, const FamilyId& id) {
    ConditionReport rep;
    TablePtr bt = binary_table();
    auto val = [&](const char* name) { return coeffs.get(name); };

    auto check_eq = [&](const std::string& cid, const Poly& lhs, const Poly& rhs) {
        Poly diff = lhs - rhs;
        rep.checks.push_back({cid, diff.is_zero(), diff.is_zero() ? "" : diff.render()});
    };

    // Conditions 2..min(n, 6) are literal identities on the slots.
    if (id.n >= 2) check_eq("2", val("xi_2"), Poly::zero(bt));
    if (id.n >= 3) check_eq("3", val("a_3"), Poly::zero(bt));
    if (id.n >= 4) check_eq("4", val("b_4"), val("a_2") * val("a_2"));
    if (id.n >= 5)
        check_eq("5", val("c_5"),
                 (val("a_2") * val("b_3")).scaled(Rat(2)) -
                     (val("a_1") * val("a_2") * val("a_2")).scaled(Rat(4)));
    if (id.n >= 6) {
        Poly a2 = val("a_2"), b3 = val("b_3"), a1 = val("a_1");
        Poly rhs = (a2 * val("c_4")).scaled(Rat(2)) + b3 * b3 -
                   (a1 * a2 * b3).scaled(Rat(8)) - (a2 * a2 * val("b_2")).scaled(Rat(2)) +
                   (val("a_0") * a2 * a2 * a2).scaled(Rat(4)) +
                   (a1 * a1 * a2 * a2).scaled(Rat(16));
        check_eq("6", val("d_6"), rhs);
    }

    std::map<std::string, Poly> derived;
    if (id.n >= 7) {
        bool guard = !val("a_2").is_zero() || !val("b_3").is_zero();
        rep.checks.push_back({"guard", guard, guard ? "" : "a_2 = b_3 = 0"});
        if (guard) {
            int want_sub = id.n == 8 ? 1 : id.sub;
            QRSE sol = solve_condition7(coeffs, want_sub);
            if (!sol.failure.empty()) {
                rep.checks.push_back({"7", false, sol.failure});
            } else if (sol.sub != want_sub) {
                rep.checks.push_back({"7." + std::to_string(want_sub), false,
                                      "coefficients decompose in subfamily 7." +
                                          std::to_string(sol.sub)});
            } else {
                auto degs = subfamily_degrees(sol.sub);
                bool ok = degree_matches(sol.q, degs[0]) && degree_matches(sol.r, degs[1]) &&
                          degree_matches(sol.s, degs[2]) && degree_matches(sol.e, degs[3]);
                std::string why = ok ? "" : "degree pattern mismatch for subfamily 7." +
                                                std::to_string(sol.sub);
                // d_5 must satisfy its equation.
                Poly d5_expected = (val("b_2") * sol.q * sol.s).scaled(Rat(2)) -
                                   (val("a_1") * val("a_1") * sol.q * sol.s).scaled(Rat(8)) -
                                   sol.e * sol.s -
                                   (val("b_1") * sol.q * sol.q * sol.r * sol.r) +
                                   val("c_3") * sol.q * sol.r;
                if (ok && val("d_5") != d5_expected) {
                    ok = false;
                    why = "d_5 equation fails, witness " + (val("d_5") - d5_expected).render();
                }
                // Coprimality of (r, s) and (q, e); zero e is allowed.
                if (ok && !sol.r.is_zero() && !sol.s.is_zero() &&
                    common_distinct_root_count(sol.r, sol.s) > 0) {
                    ok = false;
                    why = "r and s share a prime divisor";
                }
                if (ok && !sol.q.is_zero() && !sol.e.is_zero() && sol.q.degree() > 0 &&
                    common_distinct_root_count(sol.q, sol.e) > 0) {
                    ok = false;
                    why = "q and e share a prime divisor";
                }
                rep.checks.push_back({"7." + std::to_string(sol.sub), ok, why});
                derived.emplace("q", sol.q);
                derived.emplace("r", sol.r);
                derived.emplace("s", sol.s);
                derived.emplace("e", sol.e);
            }
        }
    }

    if (id.n >= 8) {
        // Requires subfamily 7.1 data: r_2 = r, s_3 = s, e_2 = e.
        auto it = derived.find("r");
        if (it == derived.end() || it->second.is_zero() || it->second.degree() != 2) {
            rep.checks.push_back({"8", false, "condition 8 needs subfamily 7.1 with r_2 != 0"});
        } else {
            Poly r2 = derived.at("r"), s3 = derived.at("s"), e2 = derived.at("e");
            Poly a1 = val("a_1");
            Poly lhs = e2 - val("b_2") + (a1 * a1).scaled(Rat(6));
            bool ok = true;
            std::string why;
            Poly A0(bt), B1(bt);
            if (lhs.is_zero()) {
                A0 = Poly::zero(bt);
            } else if (lhs.divisible_by(r2) && lhs.divide_exact(r2).is_constant()) {
                A0 = lhs.divide_exact(r2).scaled(Rat(1, 4));
            } else {
                ok = false;
                why = "e_2 - b_2 + 6*a_1^2 is not a scalar multiple of r_2";
            }
            if (ok) {
                Rat A0c = A0.constant_value();
                Poly rhs_wo_B1 = (val("a_0") * s3).scaled(Rat(6)) - s3.scaled(Rat(4) * A0c) +
                                 (val("a_0") * a1 * r2).scaled(Rat(4)) -
                                 (a1 * r2).scaled(Rat(8) * A0c) +
                                 (a1 * val("b_2")).scaled(Rat(2)) -
                                 (a1 * a1 * a1).scaled(Rat(4));
                Poly num = val("c_3") - rhs_wo_B1;
                if (num.is_zero()) {
                    B1 = Poly::zero(bt);
                } else if (num.divisible_by(r2)) {
                    B1 = num.divide_exact(r2);
                } else {
                    ok = false;
                    why = "c_3 equation does not determine B_1, witness " + num.render();
                }
                if (ok && !B1.is_zero() && B1.degree() != 1) {
                    ok = false;
                    why = "B_1 is not linear";
                }
                if (ok) {
                    Rat A0v = A0c;
                    Poly d4_expected =
                        -(s3 * B1).scaled(Rat(2)) + (r2 * r2).scaled(Rat(16) * A0v * A0v) -
                        (val("b_2") * r2).scaled(Rat(8) * A0v) +
                        (a1 * a1 * r2).scaled(Rat(16) * A0v) + (val("b_1") * s3).scaled(Rat(4)) -
                        (val("a_0") * a1 * s3).scaled(Rat(8)) -
                        (val("b_0") * r2 * r2).scaled(Rat(2)) + (val("c_2") * r2).scaled(Rat(2)) +
                        val("b_2") * val("b_2") - (a1 * a1 * val("b_2")).scaled(Rat(4)) +
                        (a1 * a1 * a1 * a1).scaled(Rat(4));
                    if (val("d_4") != d4_expected) {
                        ok = false;
                        why = "d_4 equation fails, witness " + (val("d_4") - d4_expected).render();
                    }
                }
                derived.emplace("A_0", A0);
                derived.emplace("B_1", B1);
            }
            rep.checks.push_back({"8", ok, why});
        }
    }

    bool conditions_ok = true;
    for (const auto& c : rep.checks) conditions_ok = conditions_ok && c.pass;

    // Residual h_{n+1} of the concrete split must be non-zero.
    Poly f = concrete_f(coeffs);
    Poly residual = split_h(f, id.n + 1);
    // Cross-check: the lower residuals vanish exactly when conditions hold.
    bool lower_ok = true;
    for (int k = 2; k <= id.n; ++k) lower_ok = lower_ok && split_h(f, k).is_zero();
    if (conditions_ok && !lower_ok)
        throw InternalCheckError("conditions pass but a lower residual is non-zero");
    rep.residual = residual;
    rep.checks.push_back({"residual", !residual.is_zero(),
                          residual.is_zero() ? "h_" + std::to_string(id.n + 1) +
                                                   " = 0: the index exceeds n"
                                             : residual.render()});
    rep.member = conditions_ok && !residual.is_zero();
    rep.derived = std::move(derived);
    rep.verdict = rep.member ? "member of family " + id.str()
                             : "not a member of family " + id.str();
    return rep;
}

// ---- extended conditions -----------------------------------------------------

ExtendedConditions extended_conditions(int upto) {
    ExtendedConditions out;
    out.steps = extended_steps(upto);

    // State after conditions 2..8 and 9..upto, applied to the slot symbols.
    std::vector<SubstitutionStep> chain = condition_steps(FamilyId{8, 0});
    auto ext = extended_steps(upto);
    chain.insert(chain.end(), ext.begin(), ext.end());

    TablePtr r = ring();
    auto slot_value = [&](const char* name) {
        return apply_steps(Poly::variable(r, r->index_of(name)), chain);
    };
    Poly x = Poly::variable(r, r->index_of("x"));
    Poly a1 = Poly::variable(r, r->index_of("a_1"));
    Poly a0 = Poly::variable(r, r->index_of("a_0"));
    Poly b2 = Poly::variable(r, r->index_of("b_2"));
    Poly r2 = Poly::variable(r, r->index_of("r_2"));
    Poly s3 = Poly::variable(r, r->index_of("s_3"));

    Poly root = s3 + (a1 * r2).scaled(Rat(2)) + x * r2;
    out.factor1_lhs = x.pow(3) * slot_value("a_3") + x.pow(2) * slot_value("b_4") +
                      x * slot_value("c_5") + slot_value("d_6");
    out.factor1_rhs = root * root;
    out.factor2_lhs = x.pow(3) * slot_value("a_2") + x.pow(2) * slot_value("b_3") +
                      x * slot_value("c_4") + slot_value("d_5");
    out.factor2_rhs = root * ((a0 * r2).scaled(Rat(-2)) + b2 - (a1 * a1).scaled(Rat(2)) +
                              (x * a1).scaled(Rat(2)) + x * x);
    out.identities_hold =
        out.factor1_lhs == out.factor1_rhs && out.factor2_lhs == out.factor2_rhs;
    if (!out.identities_hold)
        throw InternalCheckError("extended-condition factorization identities failed");

    out.singular_curve = {Poly::variable(r, r->index_of("w")),
                          Poly::variable(r, r->index_of("t")), root};
    return out;
}

// ---- generality ---------------------------------------------------------------

std::optional<std::int64_t> count_cA4_flop_base(const Poly& a2, const Poly& c5, const Poly& d6) {
    TablePtr bt = a2.table();
    if (a2.is_zero() && c5.is_zero()) return std::nullopt;
    if (a2.is_zero()) {
        // System (c5, w^2 - d6): two w-values per root of c5 unless d6 vanishes.
        if (c5.degree() == 0) return 0;
        return 2 * distinct_root_count(c5) - common_distinct_root_count(c5, d6);
    }
    Poly res = c5 * c5 - (a2 * a2 * d6).scaled(Rat(4));
    if (res.is_zero()) return std::nullopt;
    std::int64_t D = distinct_root_count(res);
    // Roots shared with a2 keep both w-branches (c5 vanishes there too).
    Poly shared = binary_gcd(radical(res), radical(a2));
    std::int64_t A = shared.degree() > 0 ? distinct_root_count(shared) : 0;
    std::int64_t A0 = shared.degree() > 0 ? common_distinct_root_count(shared, d6) : 0;
    return D + A - A0;
}

std::optional<std::int64_t> count_cA5_flop_base(const Poly& a2, const Poly& d6) {
    if (a2.is_zero()) return std::nullopt;
    if (a2.degree() == 0) return 0;
    std::int64_t D = distinct_root_count(a2);
    std::int64_t A0 = d6.is_zero() ? D : common_distinct_root_count(a2, d6);
    return 2 * D - A0;
}

GeneralityReport check_generality(const FamilyId& id, const SDSCoefficients& coeffs) {
    GeneralityReport rep;
    TablePtr bt = binary_table();
    auto val = [&](const char* name) { return coeffs.get(name); };

    auto need_nonzero_squarefree = [&](const Poly& p, const std::string& what,
                                       std::int64_t points) {
        if (p.is_zero()) {
            rep.detail = what + " vanishes identically";
            return;
        }
        rep.count = distinct_root_count(p);
        rep.pass = is_squarefree(p) && *rep.count == points;
        rep.detail = what + " has " + std::to_string(*rep.count) + " distinct points" +
                     (rep.pass ? "" : " (expected " + std::to_string(points) + " distinct)");
    };

    switch (id.n) {
        case 4: {
            auto count = count_cA4_flop_base(val("a_2"), val("c_5"), val("d_6"));
            if (!count) {
                rep.detail = "degenerate elimination: the flop-base system has a common component";
                return rep;
            }
            rep.count = *count;
            rep.pass = *count == 10;
            rep.detail = "V(2*w*a_2 + c_5, w^2 - d_6) in P(1,1,3) is " + std::to_string(*count) +
                         " distinct points" + (rep.pass ? "" : " (expected 10)");
            return rep;
        }
        case 5: {
            auto count = count_cA5_flop_base(val("a_2"), val("d_6"));
            if (!count) {
                rep.detail = "degenerate elimination: a_2 vanishes identically";
                return rep;
            }
            rep.count = *count;
            rep.pass = *count == 4;
            rep.detail = "V(a_2, -w^2 + d_6) in P(1,1,3) is " + std::to_string(*count) +
                         " distinct points" + (rep.pass ? "" : " (expected 4)");
            return rep;
        }
        case 6: {
            Poly a1 = val("a_1"), a2 = val("a_2");
            Poly expr = val("c_4") - (a1 * val("b_3")).scaled(Rat(2)) - a2 * val("b_2") +
                        (val("a_0") * a2 * a2).scaled(Rat(2)) + (a1 * a1 * a2).scaled(Rat(6));
            if (expr.is_zero()) {
                rep.detail = "c_4 - 2*a_1*b_3 - a_2*b_2 + 2*a_0*a_2^2 + 6*a_1^2*a_2 vanishes";
                return rep;
            }
            if (a2.is_zero() || !is_squarefree(a2) || distinct_root_count(a2) != 2) {
                rep.detail = "V(a_2) is not two distinct points";
                return rep;
            }
            Poly g = binary_gcd(val("b_3"), binary_gcd(val("c_4"), val("d_5")));
            bool all_zero = val("b_3").is_zero() && val("c_4").is_zero() && val("d_5").is_zero();
            if (all_zero || common_distinct_root_count(a2, g) > 0) {
                rep.detail = "b_3, c_4, d_5 all vanish at a point of V(a_2)";
                return rep;
            }
            rep.pass = true;
            rep.detail = "cA_6 generality conditions hold";
            return rep;
        }
        case 7: {
            switch (id.sub) {
                case 1: {
                    Poly a1 = val("a_1");
                    Poly form = -val("e_2") + (val("a_0") * val("r_2")).scaled(Rat(4)) +
                                val("b_2") - (a1 * a1).scaled(Rat(6));
                    need_nonzero_squarefree(form, "V(-e_2 + 4*a_0*r_2 + b_2 - 6*a_1^2)", 2);
                    return rep;
                }
                case 2: {
                    if (val("r_1").is_zero() || val("q_1").is_zero()) {
                        rep.detail = "r_1 or q_1 vanishes";
                        return rep;
                    }
                    std::int64_t shared = common_distinct_root_count(val("r_1"), val("q_1"));
                    rep.pass = shared == 0;
                    rep.detail = rep.pass ? "r_1 and q_1 are coprime"
                                          : "r_1 and q_1 share a prime divisor";
                    return rep;
                }
                case 3: {
                    Poly q2 = val("q_2");
                    if (q2.is_zero()) {
                        rep.detail = "q_2 vanishes";
                        return rep;
                    }
                    rep.pass = is_squarefree(q2);
                    rep.detail = rep.pass ? "q_2 is not a square of a linear form"
                                          : "q_2 is a square of a linear form";
                    return rep;
                }
                case 4:
                    rep.detail = "family 7.4 is never Q-factorial; no generality condition";
                    return rep;
                default:
                    throw PreconditionError("family 7 needs a subfamily");
            }
        }
        case 8: {
            Poly a0 = val("a_0"), A0 = val("A_0");
            rep.pass = a0 != A0;
            rep.detail = rep.pass ? "a_0 != A_0" : "a_0 = A_0";
            return rep;
        }
        default:
            rep.detail = "no generality condition recorded for family " + id.str();
            return rep;
    }
}

} // namespace canlink::sds
