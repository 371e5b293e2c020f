#include <doctest.h>

#include "canlink/binforms.hpp"
#include "canlink/sds.hpp"
#include "canlink/singularity.hpp"
#include "test_util.hpp"

using namespace canlink;
using namespace canlink::sds;
using testutil::Rng;

TEST_CASE("generic sextic is weighted homogeneous with the 23 coefficient slots") {
    Poly f = generic_f();
    CHECK(f.is_homogeneous(grading(), 6));
    int params = 0;
    for (std::size_t v = 5; v < ring()->size(); ++v)
        if (f.depends_on(v)) ++params;
    CHECK(params == 23);
    // Derived symbols enter only through conditions.
    CHECK_FALSE(f.depends_on(ring()->index_of("q")));
    CHECK_FALSE(f.depends_on(ring()->index_of("A_0")));
}

TEST_CASE("concrete sextic reproduces the two-cA5 example") {
    SDSCoefficients coeffs = parse_family_file("b_0 = 1/2\nd_6 = y^6 + z^6\n");
    Poly f = concrete_f(coeffs);
    Poly expect = parse_poly("-w^2 + x^4*t^2 + x^2*t^4 + y^6 + z^6", geometry_table());
    CHECK(f == expect);
}

TEST_CASE("all-zero coefficients give the bare sextic") {
    Poly f = concrete_f(SDSCoefficients{});
    CHECK(f == parse_poly("-w^2 + x^4*t^2", geometry_table()));
}

TEST_CASE("inhomogeneous coefficients are rejected") {
    SDSCoefficients coeffs;
    coeffs.values.emplace("d_6", parse_poly("y^5", binary_table()));
    CHECK_THROWS_AS(concrete_f(coeffs), PreconditionError);
}

TEST_CASE("condition chains") {
    CHECK(condition_steps(FamilyId{1, 0}).empty());
    CHECK(condition_steps(FamilyId{6, 0}).size() == 5);
    CHECK(condition_steps(FamilyId{7, 2}).size() == 7);
    CHECK(condition_steps(FamilyId{8, 0}).size() == 8);

    // The condition-6 image matches the published text.
    auto steps = condition_steps(FamilyId{6, 0});
    CHECK(steps.back().images.at("d_6") ==
          "2*a_2*c_4 + b_3^2 - 8*a_1*a_2*b_3 - 2*a_2^2*b_2 + 4*a_0*a_2^3 + 16*a_1^2*a_2^2");

    // Substituting a chain twice equals substituting it once.
    Poly once = apply_steps(generic_f(), steps);
    CHECK(apply_steps(once, steps) == once);
}

TEST_CASE("condition 4 kills h_4 symbolically") {
    Poly f = apply_steps(generic_f(), condition_steps(FamilyId{4, 0}));
    CHECK(split_h(f, 2).is_zero());
    CHECK(split_h(f, 3).is_zero());
    CHECK(split_h(f, 4).is_zero());
}

TEST_CASE("h_2 = xi_2 and the residual ladder for n <= 6") {
    CHECK(split_h(generic_f(), 2) ==
          Poly::variable(ring(), ring()->index_of("xi_2")));
    CHECK(residual_h(FamilyId{3, 0}, 3).is_zero());
    for (int n = 2; n <= 6; ++n) {
        FamilyId id{n, 0};
        for (int k = 2; k <= n; ++k) CHECK(residual_h(id, k).is_zero());
        CHECK_FALSE(residual_h(id, n + 1).is_zero());
    }
}

TEST_CASE("h_7 after conditions 2..6 matches the displayed factorized form") {
    Poly f = apply_steps(generic_f(), condition_steps(FamilyId{6, 0}));
    // Write a_2 = q r, b_3 = q s + 4 a_1 q r, the gcd decomposition.
    SubstitutionStep qr{"qr", {{"a_2", "q*r"}, {"b_3", "q*s + 4*a_1*q*r"}}};
    Poly f7 = apply_steps(f, {qr});
    Poly h7 = split_h(f7, 7);
    Poly display = parse_poly(
        "q*(r*(-12*a_0*q^2*r*s + 4*b_2*q*s - 2*b_1*q^2*r^2 + 2*c_3*q*r - 2*d_5)"
        " - s*(2*c_4 - 4*a_1*q*s))",
        ring());
    CHECK(h7 == display);
}

TEST_CASE("conditions 7.x kill h_7; condition 8 kills h_8") {
    for (int sub = 1; sub <= 4; ++sub) {
        FamilyId id{7, sub};
        for (int k = 2; k <= 7; ++k) CHECK(residual_h(id, k).is_zero());
        CHECK_FALSE(residual_h(id, 8).is_zero());
    }
    FamilyId id8{8, 0};
    for (int k = 2; k <= 8; ++k) CHECK(residual_h(id8, k).is_zero());
    CHECK_FALSE(residual_h(id8, 9).is_zero());
}

TEST_CASE("evaluation commutes with the symbolic split") {
    // Independent route: substituting random rational parameter values into
    // the symbolic residual equals splitting the substituted sextic.
    Rng rng(909090);
    FamilyId id{6, 0};
    Poly f_sym = apply_steps(generic_f(), condition_steps(id));
    Poly h7_sym = split_h(f_sym, 7);

    TablePtr r = ring();
    for (int trial = 0; trial < 5; ++trial) {
        std::map<std::size_t, Poly> values;
        for (std::size_t v = 5; v < r->size(); ++v) {
            // Parameter slot of declared degree d gets a random form.
            std::int64_t d = grading()[v];
            Poly form = Poly::zero(r);
            for (std::int64_t i = 0; i <= d; ++i) {
                Mono m = Mono::unit(r->size());
                m.e[r->index_of("y")] = static_cast<std::int32_t>(d - i);
                m.e[r->index_of("z")] = static_cast<std::int32_t>(i);
                m.deg = d;
                form = form + Poly::monomial(r, m, testutil::random_rat(rng, 3, 2));
            }
            values.emplace(v, form);
        }
        Poly f_conc = f_sym.substituted(values);
        Poly h7_conc = split_h(f_conc, 7);
        CHECK(h7_sym.substituted(values) == h7_conc);
    }
}

TEST_CASE("parameter dimensions reproduce the published row") {
    std::vector<int> expected = {77, 74, 70, 65, 59, 52, 44, 35};
    for (int n = 1; n <= 8; ++n) {
        FamilyId id{n, n == 7 ? 1 : 0};
        CHECK(param_dim(id) == expected[n - 1]);
    }
    for (int sub = 1; sub <= 4; ++sub) CHECK(param_dim(FamilyId{7, sub}) == 44);
    std::vector<int> moduli = {67, 64, 60, 55, 49, 42, 34, 25};
    for (int n = 1; n <= 8; ++n)
        CHECK(expected_moduli_dim(FamilyId{n, n == 7 ? 1 : 0}) == moduli[n - 1]);
}

TEST_CASE("family ids parse and enumerate") {
    CHECK(parse_family("5").n == 5);
    CHECK(parse_family("7.3").sub == 3);
    CHECK_THROWS_AS(parse_family("9"), PreconditionError);
    CHECK_THROWS_AS(parse_family("6.2"), PreconditionError);
    CHECK(all_families().size() == 11);
}

TEST_CASE("membership fails with the witness on a tampered b_4") {
    SDSCoefficients coeffs;
    TablePtr bt = binary_table();
    coeffs.values.emplace("a_2", parse_poly("y*z", bt));
    coeffs.values.emplace("b_4", parse_poly("y^2*z^2 + y^4", bt));
    coeffs.values.emplace("d_6", parse_poly("y^6 + z^6", bt));
    ConditionReport rep = check_membership(coeffs, FamilyId{4, 0});
    CHECK_FALSE(rep.member);
    bool found = false;
    for (const auto& c : rep.checks)
        if (c.id == "4") {
            found = true;
            CHECK_FALSE(c.pass);
            CHECK(c.witness == "y^4");
        }
    CHECK(found);
}

TEST_CASE("the two-cA5 sextic is a member of family 5") {
    SDSCoefficients coeffs = parse_family_file("b_0 = 1/2\nd_6 = y^6 + z^6\n");
    ConditionReport rep = check_membership(coeffs, FamilyId{5, 0});
    CHECK(rep.member);
    CHECK(rep.residual == parse_poly("y^6 + z^6", geometry_table()));
}

TEST_CASE("membership at n = 6 reports the h_6 residual witness") {
    SDSCoefficients coeffs = parse_family_file("d_6 = y^6 + z^6\n");
    ConditionReport rep = check_membership(coeffs, FamilyId{6, 0});
    CHECK_FALSE(rep.member);
    bool cond6 = false;
    for (const auto& c : rep.checks)
        if (c.id == "6") {
            cond6 = true;
            CHECK_FALSE(c.pass);
            CHECK(c.witness == "y^6 + z^6");
        }
    CHECK(cond6);
}

namespace {

// Concrete family coefficients built by evaluating the condition chain at
// explicit parameter values.
SDSCoefficients concrete_from_chain(const FamilyId& id,
                                    const std::map<std::string, std::string>& values) {
    TablePtr r = ring();
    auto chain = condition_steps(id);
    std::map<std::size_t, Poly> eval;
    for (const auto& [name, text] : values)
        eval.emplace(r->index_of(name), parse_poly(text, r));
    SDSCoefficients out;
    const char* slot_names[] = {"xi_2", "a_0", "a_1", "a_2", "a_3", "b_0", "b_1", "b_2", "b_3",
                                "b_4",  "c_0", "c_1", "c_2", "c_3", "c_4", "c_5", "d_0", "d_1",
                                "d_2",  "d_3", "d_4", "d_5", "d_6"};
    for (const char* nm : slot_names) {
        Poly v = apply_steps(Poly::variable(r, r->index_of(nm)), chain).substituted(eval);
        out.values.emplace(nm, v.on_table(binary_table()));
    }
    return out;
}

} // namespace

TEST_CASE("a constructed family-7.1 member passes membership") {
    std::map<std::string, std::string> vals = {
        {"a_0", "1"},     {"a_1", "y"},  {"b_0", "0"},  {"b_1", "z"},  {"b_2", "y^2"},
        {"c_0", "0"},     {"c_1", "0"},  {"c_2", "0"},  {"c_3", "y^2*z"},
        {"d_0", "1"},     {"d_1", "0"},  {"d_2", "y*z"}, {"d_3", "0"}, {"d_4", "y^4"},
        {"r_2", "y^2"},   {"s_3", "z^3"}, {"e_2", "y*z"},
    };
    SDSCoefficients coeffs = concrete_from_chain(FamilyId{7, 1}, vals);
    ConditionReport rep = check_membership(coeffs, FamilyId{7, 1});
    CHECK(rep.member);
    CHECK(rep.derived.at("q") == Poly::constant(binary_table(), Rat(1)));
    CHECK(rep.derived.at("r") == parse_poly("y^2", binary_table()));
    CHECK(rep.derived.at("s") == parse_poly("z^3", binary_table()));
    CHECK(rep.derived.at("e") == parse_poly("y*z", binary_table()));
}

TEST_CASE("a constructed family-8 member passes membership") {
    std::map<std::string, std::string> vals = {
        {"a_0", "1"},   {"a_1", "y"},   {"b_0", "0"},   {"b_1", "z"},   {"b_2", "y^2"},
        {"c_0", "0"},   {"c_1", "0"},   {"c_2", "y*z"}, {"d_0", "1"},   {"d_1", "0"},
        {"d_2", "y*z"}, {"d_3", "z^3"},
        {"r_2", "y^2"}, {"s_3", "z^3"}, {"A_0", "2"},   {"B_1", "z"},
    };
    SDSCoefficients coeffs = concrete_from_chain(FamilyId{8, 0}, vals);
    ConditionReport rep = check_membership(coeffs, FamilyId{8, 0});
    CHECK(rep.member);
    CHECK(rep.derived.at("A_0") == Poly::constant(binary_table(), Rat(2)));
    CHECK(rep.derived.at("B_1") == parse_poly("z", binary_table()));
}

TEST_CASE("point evaluations at P_t match the displayed pattern") {
    Poly f = generic_f_expanded();
    TablePtr t = expanded_table();
    auto zero = Poly::zero(t);
    auto one = Poly::constant(t, Rat(1));
    JacobianEval jac = point_jacobian(f, {zero, zero, zero, one, zero});
    auto var = [&](const std::string& n) { return Poly::variable(t, t->index_of(n)); };
    CHECK(jac.value == var("d_0"));
    CHECK(jac.dx == var("c_0").scaled(Rat(2)));
    CHECK(jac.dy == var("d_1_0").scaled(Rat(2))); // 2 * dd_1/dy
    CHECK(jac.dz == var("d_1_1").scaled(Rat(2))); // 2 * dd_1/dz
    CHECK(jac.dt == var("d_0").scaled(Rat(6)));
}

TEST_CASE("point evaluations at [0, beta, gamma, 0, 0]") {
    Poly f = generic_f_expanded();
    // Extend the expanded table by the symbolic point coordinates.
    std::vector<std::string> names = expanded_table()->names();
    names.push_back("beta_pt");
    names.push_back("gamma_pt");
    TablePtr ext = VarTable::make(names);
    Poly beta = Poly::variable(ext, ext->index_of("beta_pt"));
    Poly gamma = Poly::variable(ext, ext->index_of("gamma_pt"));
    Poly zero = Poly::zero(ext);
    JacobianEval jac = point_jacobian(f, {zero, beta, gamma, zero, zero});

    // d_6 and c_5 evaluated at (beta, gamma).
    auto eval_slot = [&](const std::string& slot, int degree) {
        Poly acc = Poly::zero(ext);
        for (int i = 0; i <= degree; ++i) {
            Poly coeff = Poly::variable(ext, ext->index_of(slot + "_" + std::to_string(i)));
            acc = acc + coeff * beta.pow(degree - i) * gamma.pow(i);
        }
        return acc;
    };
    CHECK(jac.value == eval_slot("d_6", 6));
    CHECK(jac.dx == eval_slot("c_5", 5));
    CHECK(jac.dt == eval_slot("d_5", 5).scaled(Rat(2)));
}

TEST_CASE("extended conditions 9..12") {
    ExtendedConditions ext = extended_conditions(12);
    CHECK(ext.identities_hold);
    CHECK(ext.steps.size() == 4);
    CHECK(ext.steps[3].images.at("d_0") == "b_0^2 - 4*a_0^2*b_0 + 4*a_0^4");
    CHECK(ext.steps[0].images.at("c_2") ==
          "r_2*B_0 - 6*a_0^2*r_2 + 2*a_0*b_2 + 2*a_1*b_1 - 12*a_0*a_1^2");
    CHECK(ext.singular_curve.size() == 3);
    Poly root = parse_poly("s_3 + 2*a_1*r_2 + x*r_2", ring());
    CHECK(ext.singular_curve[2] == root);

    // The factorizations are exact squares/products.
    CHECK(ext.factor1_lhs == ext.factor1_rhs);
    CHECK(ext.factor2_lhs == ext.factor2_rhs);
}

TEST_CASE("conditions 9..11 kill the next residuals") {
    std::vector<SubstitutionStep> chain = condition_steps(FamilyId{8, 0});
    for (int upto = 9; upto <= 11; ++upto) {
        auto ext = extended_steps(upto);
        std::vector<SubstitutionStep> full = chain;
        full.insert(full.end(), ext.begin(), ext.end());
        Poly f = apply_steps(generic_f(), full);
        CHECK(split_h(f, upto).is_zero());
        CHECK_FALSE(split_h(f, upto + 1).is_zero());
    }
}

TEST_CASE("generality: cA_4 flop base counts 10 points") {
    // a_2 = yz, c_5 = 0, d_6 = y^6 + z^6: 6 points with w = 0 over the roots
    // of d_6, plus w = +-1 over [0:1] and [1:0] (hand enumeration).
    SDSCoefficients coeffs =
        parse_family_file("a_2 = y*z\nd_6 = y^6 + z^6\n");
    GeneralityReport rep = check_generality(FamilyId{4, 0}, coeffs);
    CHECK(rep.pass);
    CHECK(rep.count.has_value());
    CHECK(*rep.count == 10);
}

TEST_CASE("generality: cA_4 degenerate and deficient instances fail") {
    GeneralityReport deg = check_generality(
        FamilyId{4, 0}, parse_family_file("a_2 = y*z\nd_6 = 0\nc_5 = 0\n"));
    CHECK_FALSE(deg.pass);

    // c_5 = y^5, d_6 = y^6: every solution sits over roots of y^2-divisible
    // forms, far fewer than 10 points.
    GeneralityReport bad = check_generality(
        FamilyId{4, 0}, parse_family_file("a_2 = y*z\nc_5 = y^5\nd_6 = y^6\n"));
    CHECK_FALSE(bad.pass);
}

TEST_CASE("generality: cA_5 counts 4 points on the standard instance") {
    SDSCoefficients coeffs = parse_family_file("a_2 = y*z\nd_6 = y^6 + z^6\n");
    GeneralityReport rep = check_generality(FamilyId{5, 0}, coeffs);
    CHECK(rep.pass);
    CHECK(*rep.count == 4);

    GeneralityReport two = check_generality(FamilyId{5, 0},
                                            parse_family_file("a_2 = y^2\nd_6 = y^6 + z^6\n"));
    CHECK_FALSE(two.pass);
    CHECK(*two.count == 2);
}

TEST_CASE("generality: cA_6 conditions") {
    SDSCoefficients good = parse_family_file(
        "a_2 = y*z\nc_4 = y^4 + z^4\nb_3 = y^3\nd_5 = z^5\n");
    CHECK(check_generality(FamilyId{6, 0}, good).pass);

    // b_3, c_4, d_5 all vanish at [0:1], a root of a_2.
    SDSCoefficients bad = parse_family_file(
        "a_2 = y*z\nc_4 = y^4\nb_3 = y^3\nd_5 = y^5\n");
    CHECK_FALSE(check_generality(FamilyId{6, 0}, bad).pass);
}

TEST_CASE("generality: cA_7 subfamilies") {
    // 7.1: two distinct points of the degree-2 form.
    SDSCoefficients f71 = parse_family_file("e_2 = y*z\na_0 = 0\nb_2 = 0\na_1 = 0\nr_2 = 0\n");
    CHECK(check_generality(FamilyId{7, 1}, f71).pass);
    SDSCoefficients f71bad = parse_family_file("e_2 = y^2\na_0 = 0\nb_2 = 0\na_1 = 0\nr_2 = 0\n");
    CHECK_FALSE(check_generality(FamilyId{7, 1}, f71bad).pass);

    // 7.2: coprimality of r_1 and q_1.
    CHECK_FALSE(check_generality(FamilyId{7, 2},
                                 parse_family_file("q_1 = y\nr_1 = y\n")).pass);
    CHECK(check_generality(FamilyId{7, 2}, parse_family_file("q_1 = y\nr_1 = z\n")).pass);

    // 7.3: q_2 must not be a square.
    CHECK(check_generality(FamilyId{7, 3}, parse_family_file("q_2 = y*z\n")).pass);
    CHECK_FALSE(check_generality(FamilyId{7, 3}, parse_family_file("q_2 = y^2\n")).pass);
}

TEST_CASE("generality: cA_8 requires a_0 != A_0") {
    CHECK_FALSE(check_generality(FamilyId{8, 0},
                                 parse_family_file("a_0 = 2\nA_0 = 2\n")).pass);
    CHECK(check_generality(FamilyId{8, 0}, parse_family_file("a_0 = 2\nA_0 = 1\n")).pass);
}

TEST_CASE("squarefree detection agrees with the quadratic discriminant") {
    // Independent check: a binary quadratic a y^2 + b yz + c z^2 is
    // squarefree iff b^2 - 4ac != 0.
    TablePtr bt = binary_table();
    Rng rng(112358);
    for (int i = 0; i < 200; ++i) {
        Rat a = testutil::random_rat(rng, 4, 2), b = testutil::random_rat(rng, 4, 2),
            c = testutil::random_rat(rng, 4, 2);
        Poly q = Poly::monomial(bt, Mono::of({2, 0}), a) + Poly::monomial(bt, Mono::of({1, 1}), b) +
                 Poly::monomial(bt, Mono::of({0, 2}), c);
        if (q.is_zero()) continue;
        Rat disc = b * b - Rat(4) * a * c;
        CHECK(is_squarefree(q) == !disc.is_zero());
    }
}

TEST_CASE("the residual-degree cost guard is enforced and overridable") {
    FamilyId id{4, 0};
    CHECK_THROWS_AS(residual_h(id, 8), ResourceLimitError);
    CHECK_NOTHROW(residual_h(id, 7, true));
}

TEST_CASE("h_6 after conditions 2..5 equals the displayed analytic residual") {
    // The degree-6 part of the split residual of a member with conditions
    // 2..5 imposed: d_6 - 2 a_2 c_4 + 2 a_2^2 b_2 - 4 a_0 a_2^3
    // - (b_3 - 4 a_1 a_2)^2.
    Poly h6 = residual_h(FamilyId{5, 0}, 6);
    Poly expect = parse_poly(
        "d_6 - 2*a_2*c_4 + 2*a_2^2*b_2 - 4*a_0*a_2^3 - (b_3 - 4*a_1*a_2)^2", ring());
    CHECK(h6 == expect);
}

TEST_CASE("constructed members of the other cA_7 subfamilies pass membership") {
    std::map<std::string, std::string> base = {
        {"a_0", "1"},  {"a_1", "y"},  {"b_0", "0"},      {"b_1", "z"}, {"b_2", "y^2"},
        {"c_0", "0"},  {"c_1", "0"},  {"c_2", "0"},      {"c_3", "y^2*z"},
        {"d_0", "1"},  {"d_1", "0"},  {"d_2", "y*z"},    {"d_3", "0"}, {"d_4", "y^4"},
    };

    SUBCASE("7.2: q of degree 1, monic under y < z") {
        auto vals = base;
        vals.insert({{"q_1", "y"}, {"r_1", "z"}, {"s_2", "y^2"}, {"e_3", "z^3"}});
        SDSCoefficients coeffs = concrete_from_chain(FamilyId{7, 2}, vals);
        ConditionReport rep = check_membership(coeffs, FamilyId{7, 2});
        CHECK(rep.member);
        CHECK(rep.derived.at("q") == parse_poly("y", binary_table()));
        CHECK(rep.derived.at("r") == parse_poly("z", binary_table()));
        CHECK(rep.derived.at("s") == parse_poly("y^2", binary_table()));
        CHECK(rep.derived.at("e") == parse_poly("z^3", binary_table()));
    }

    SUBCASE("7.3: r = 1, q of degree 2") {
        auto vals = base;
        vals.insert({{"q_2", "y*z"}, {"s_1", "y"}, {"e_4", "y^4 + z^4"}});
        SDSCoefficients coeffs = concrete_from_chain(FamilyId{7, 3}, vals);
        ConditionReport rep = check_membership(coeffs, FamilyId{7, 3});
        CHECK(rep.member);
        CHECK(rep.derived.at("q") == parse_poly("y*z", binary_table()));
        CHECK(rep.derived.at("r") == Poly::constant(binary_table(), Rat(1)));
        CHECK(rep.derived.at("e") == parse_poly("y^4 + z^4", binary_table()));
    }

    SUBCASE("7.4: r = 0, s = 1, a_2 = 0") {
        auto vals = base;
        vals.insert({{"q_3", "y^3"}, {"e_5", "z^5"}});
        SDSCoefficients coeffs = concrete_from_chain(FamilyId{7, 4}, vals);
        ConditionReport rep = check_membership(coeffs, FamilyId{7, 4});
        CHECK(rep.member);
        CHECK(rep.derived.at("q") == parse_poly("y^3", binary_table()));
        CHECK(rep.derived.at("r").is_zero());
        CHECK(rep.derived.at("s") == Poly::constant(binary_table(), Rat(1)));
        CHECK(rep.derived.at("e") == parse_poly("z^5", binary_table()));
    }
}

TEST_CASE("the weighted chart split satisfies both splitting identities") {
    Poly f = apply_steps(generic_f(), condition_steps(FamilyId{4, 0}));
    Poly g = chart(f);
    SplitRequest req{g, ring()->index_of("t"), 6, grading()};
    SplitSeries s = split(req);
    CHECK(verify_split(g, ring()->index_of("t"), s));
    CHECK(s.h.graded_part(grading(), 4).is_zero());
    CHECK_FALSE(s.h.graded_part(grading(), 5).is_zero());
}

TEST_CASE("membership and germ classification agree on concrete members") {
    // The chart of a family-n member at the distinguished point is a
    // 4-variable germ whose index must be exactly n.
    auto classify_chart = [](const SDSCoefficients& coeffs) {
        Poly f = concrete_f(coeffs);
        TablePtr geom = geometry_table();
        std::map<std::size_t, Poly> x1{{geom->index_of("x"), Poly::constant(geom, Rat(1))}};
        GermPresentation germ{f.substituted(x1), {}, 16};
        return classify_cAn(germ);
    };

    SDSCoefficients five = parse_family_file("b_0 = 1/2\nd_6 = y^6 + z^6\n");
    GermReport r5 = classify_chart(five);
    CHECK(r5.kind == GermKind::Index);
    CHECK(r5.index == 5);

    std::map<std::string, std::string> vals = {
        {"a_0", "1"},     {"a_1", "y"},  {"b_0", "0"},  {"b_1", "z"},  {"b_2", "y^2"},
        {"c_0", "0"},     {"c_1", "0"},  {"c_2", "0"},  {"c_3", "y^2*z"},
        {"d_0", "1"},     {"d_1", "0"},  {"d_2", "y*z"}, {"d_3", "0"}, {"d_4", "y^4"},
        {"r_2", "y^2"},   {"s_3", "z^3"}, {"e_2", "y*z"},
    };
    SDSCoefficients seven = concrete_from_chain(FamilyId{7, 1}, vals);
    GermReport r7 = classify_chart(seven);
    CHECK(r7.kind == GermKind::Index);
    CHECK(r7.index == 7);
}

TEST_CASE("membership rejects data from a different subfamily") {
    // a_2 = 0 forces subfamily 7.4; asking for 7.1 must fail, not silently
    // reclassify.
    std::map<std::string, std::string> vals = {
        {"a_0", "1"},  {"a_1", "y"},  {"b_0", "0"},   {"b_1", "z"}, {"b_2", "y^2"},
        {"c_0", "0"},  {"c_1", "0"},  {"c_2", "0"},   {"c_3", "y^2*z"},
        {"d_0", "1"},  {"d_1", "0"},  {"d_2", "y*z"}, {"d_3", "0"}, {"d_4", "y^4"},
        {"q_3", "y^3"}, {"e_5", "z^5"},
    };
    SDSCoefficients coeffs = concrete_from_chain(FamilyId{7, 4}, vals);
    ConditionReport rep = check_membership(coeffs, FamilyId{7, 1});
    CHECK_FALSE(rep.member);
    bool flagged = false;
    for (const auto& c : rep.checks)
        if (c.id == "7.1" && !c.pass &&
            c.witness.find("subfamily 7.4") != std::string::npos)
            flagged = true;
    CHECK(flagged);
}

TEST_CASE("h_9 after conditions 2..8 has the displayed structure") {
    // h_9 = Q - 2*d_3*r_2^3 with Q free of d_3, and h_9 = 8*(a_0 - A_0)*s_3^3
    // + r_2 * R.
    Poly h9 = residual_h(FamilyId{8, 0}, 9, true);
    TablePtr r = ring();
    CHECK(h9.coeff_of(r->index_of("d_3"), 1) == parse_poly("-2*r_2^3", r));
    CHECK_FALSE(h9.coeff_of(r->index_of("d_3"), 0).depends_on(r->index_of("d_3")));
    std::map<std::size_t, Poly> r2zero{{r->index_of("r_2"), Poly::zero(r)}};
    CHECK(h9.substituted(r2zero) == parse_poly("8*(a_0 - A_0)*s_3^3", r));
}

TEST_CASE("h_8 in subfamily 7.2 satisfies the displayed divisibility") {
    // h_8 + e^2 r^2 is divisible by q (here e_3, r_1, q_1).
    Poly h8 = residual_h(FamilyId{7, 2}, 8, true);
    Poly probe = h8 + parse_poly("e_3^2*r_1^2", ring());
    CHECK(probe.divisible_by(Poly::variable(ring(), ring()->index_of("q_1"))));
}
