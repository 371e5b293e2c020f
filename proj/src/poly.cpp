#include "canlink/poly.hpp"

#include <algorithm>

#include "canlink/errors.hpp"

namespace canlink {

void Poly::check_same_table(const Poly& o) const {
    if (!table_ || !o.table_ || !table_->same_as(*o.table_))
        throw PreconditionError("polynomials built over different variable tables");
}

void Poly::add_term(const Mono& m, const Rat& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = terms_.emplace(m, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Poly Poly::constant(TablePtr table, const Rat& c) {
    Poly p(std::move(table));
    p.add_term(Mono::unit(p.table_->size()), c);
    return p;
}

Poly Poly::variable(TablePtr table, std::size_t var, std::int32_t power) {
    Poly p(std::move(table));
    if (var >= p.table_->size()) throw PreconditionError("variable index out of range");
    if (power < 0) throw PreconditionError("negative exponent");
    Mono m = Mono::unit(p.table_->size());
    m.e[var] = power;
    m.deg = power;
    p.add_term(m, Rat(1));
    return p;
}

Poly Poly::monomial(TablePtr table, Mono m, const Rat& c) {
    Poly p(std::move(table));
    if (m.e.size() != p.table_->size()) throw PreconditionError("monomial length mismatch");
    p.add_term(m, c);
    return p;
}

Rat Poly::constant_value() const {
    if (terms_.empty()) return Rat(0);
    if (!is_constant()) throw PreconditionError("polynomial is not constant");
    return terms_.begin()->second;
}

Poly Poly::operator-() const {
    Poly r(table_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

Poly operator+(const Poly& a, const Poly& b) {
    a.check_same_table(b);
    Poly r = a;
    for (const auto& [m, c] : b.terms_) r.add_term(m, c);
    return r;
}

Poly operator-(const Poly& a, const Poly& b) {
    a.check_same_table(b);
    Poly r = a;
    for (const auto& [m, c] : b.terms_) r.add_term(m, -c);
    return r;
}

Poly operator*(const Poly& a, const Poly& b) {
    a.check_same_table(b);
    Poly r(a.table_);
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
    return r;
}

bool operator==(const Poly& a, const Poly& b) {
    a.check_same_table(b);
    return a.terms_ == b.terms_;
}

Poly Poly::scaled(const Rat& c) const {
    if (c.is_zero()) return Poly(table_);
    Poly r(table_);
    for (const auto& [m, k] : terms_) r.terms_.emplace(m, k * c);
    return r;
}

Poly Poly::pow(std::int64_t k) const {
    if (k < 0) throw PreconditionError("negative polynomial power");
    Poly acc = Poly::constant(table_, Rat(1));
    Poly base = *this;
    while (k > 0) {
        if (k & 1) acc = acc * base;
        if (k >>= 1) base = base * base;
    }
    return acc;
}

Poly Poly::mul_trunc(const Poly& o, std::int64_t bound) const {
    check_same_table(o);
    Poly r(table_);
    for (const auto& [ma, ca] : terms_) {
        if (ma.deg > bound) continue;
        for (const auto& [mb, cb] : o.terms_) {
            if (ma.deg + mb.deg > bound) continue;
            r.add_term(ma * mb, ca * cb);
        }
    }
    return r;
}

Poly Poly::pow_trunc(std::int64_t k, std::int64_t bound) const {
    if (k < 0) throw PreconditionError("negative polynomial power");
    Poly acc = Poly::constant(table_, Rat(1));
    Poly base = truncated(bound);
    while (k > 0) {
        if (k & 1) acc = acc.mul_trunc(base, bound);
        if (k >>= 1) base = base.mul_trunc(base, bound);
    }
    return acc;
}

Poly Poly::truncated(std::int64_t bound) const {
    Poly r(table_);
    for (const auto& [m, c] : terms_)
        if (m.deg <= bound) r.terms_.emplace(m, c);
    return r;
}

Poly Poly::mul_trunc_weighted(const Poly& o, const Weighting& w, std::int64_t bound) const {
    check_same_table(o);
    std::vector<std::tuple<std::int64_t, const Mono*, const Rat*>> rhs;
    for (const auto& [m, c] : o.terms_) {
        std::int64_t d = m.weighted_deg(w);
        if (d <= bound) rhs.emplace_back(d, &m, &c);
    }
    std::sort(rhs.begin(), rhs.end(),
              [](const auto& a, const auto& b) { return std::get<0>(a) < std::get<0>(b); });
    Poly r(table_);
    for (const auto& [ma, ca] : terms_) {
        std::int64_t da = ma.weighted_deg(w);
        if (da > bound) continue;
        for (const auto& [db, mb, cb] : rhs) {
            if (da + db > bound) break;
            r.add_term(ma * *mb, ca * *cb);
        }
    }
    return r;
}

std::optional<std::int64_t> Poly::weight(const Weighting& w) const {
    if (w.size() != table_->size()) throw PreconditionError("weighting length mismatch");
    for (auto x : w)
        if (x < 0) throw PreconditionError("negative weight");
    std::optional<std::int64_t> best;
    for (const auto& [m, c] : terms_) {
        std::int64_t d = m.weighted_deg(w);
        if (!best || d < *best) best = d;
    }
    return best;
}

std::optional<std::int64_t> Poly::multiplicity() const {
    std::optional<std::int64_t> best;
    for (const auto& [m, c] : terms_)
        if (!best || m.deg < *best) best = m.deg;
    return best;
}

Poly Poly::graded_part(const Weighting& w, std::int64_t d) const {
    if (w.size() != table_->size()) throw PreconditionError("weighting length mismatch");
    Poly r(table_);
    for (const auto& [m, c] : terms_)
        if (m.weighted_deg(w) == d) r.terms_.emplace(m, c);
    return r;
}

Poly Poly::weighted_truncated(const Weighting& w, std::int64_t bound) const {
    Poly r(table_);
    for (const auto& [m, c] : terms_)
        if (m.weighted_deg(w) <= bound) r.terms_.emplace(m, c);
    return r;
}

Poly Poly::coeff_slice(std::size_t var, std::int32_t i, std::int64_t d, const Weighting& w) const {
    if (var >= table_->size()) throw PreconditionError("variable index out of range");
    Poly r(table_);
    for (const auto& [m, c] : terms_) {
        if (m.e[var] != i) continue;
        std::int64_t rest = m.weighted_deg(w) - w[var] * i;
        if (rest != d) continue;
        Mono m2 = m;
        m2.deg -= m2.e[var];
        m2.e[var] = 0;
        r.terms_.emplace(m2, c);
    }
    return r;
}

Poly Poly::coeff_slice(std::size_t var, std::int32_t i, std::int64_t d) const {
    return coeff_slice(var, i, d, table_->weights());
}

Poly Poly::coeff_of(std::size_t var, std::int32_t i) const {
    Poly r(table_);
    for (const auto& [m, c] : terms_) {
        if (m.e[var] != i) continue;
        Mono m2 = m;
        m2.deg -= m2.e[var];
        m2.e[var] = 0;
        r.terms_.emplace(m2, c);
    }
    return r;
}

std::int32_t Poly::degree_in(std::size_t var) const {
    std::int32_t d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.e[var]);
    return d;
}

std::int32_t Poly::valuation_in(std::size_t var) const {
    if (terms_.empty()) return 0;
    std::int32_t v = terms_.begin()->first.e[var];
    for (const auto& [m, c] : terms_) v = std::min(v, m.e[var]);
    return v;
}

bool Poly::depends_on(std::size_t var) const {
    for (const auto& [m, c] : terms_)
        if (m.e[var] != 0) return true;
    return false;
}

bool Poly::is_homogeneous(const Weighting& w, std::int64_t d) const {
    for (const auto& [m, c] : terms_)
        if (m.weighted_deg(w) != d) return false;
    return true;
}

Poly Poly::derivative(std::size_t var) const {
    Poly r(table_);
    for (const auto& [m, c] : terms_) {
        if (m.e[var] == 0) continue;
        Mono m2 = m;
        m2.e[var] -= 1;
        m2.deg -= 1;
        r.add_term(m2, c * Rat(m.e[var]));
    }
    return r;
}

namespace {

Poly substituted_impl(const Poly& p, const std::map<std::size_t, Poly>& images,
                      std::int64_t bound, bool bounded) {
    // Target table: shared table of the images when present, else p's.
    TablePtr target = p.table();
    for (const auto& [v, img] : images) {
        if (v >= p.table()->size()) throw PreconditionError("substituted variable out of range");
        if (!img.table()) throw PreconditionError("image without table");
        target = img.table();
    }
    for (const auto& [v, img] : images)
        if (!img.table()->same_as(*target))
            throw PreconditionError("substitution images on mismatched tables");

    // Map untouched variables of p by name into the target table.
    std::vector<std::optional<std::size_t>> remap(p.table()->size());
    for (std::size_t i = 0; i < p.table()->size(); ++i) {
        if (images.count(i)) continue;
        remap[i] = target->find(p.table()->name(i));
    }

    std::map<std::pair<std::size_t, std::int32_t>, Poly> power_cache;
    auto image_pow = [&](std::size_t v, std::int32_t e) -> const Poly& {
        auto key = std::make_pair(v, e);
        auto it = power_cache.find(key);
        if (it != power_cache.end()) return it->second;
        const Poly& img = images.at(v);
        Poly val = bounded ? img.pow_trunc(e, bound) : img.pow(e);
        return power_cache.emplace(key, std::move(val)).first->second;
    };

    PolyBuilder out(target);
    for (const auto& [m, c] : p.terms()) {
        Poly acc = Poly::constant(target, c);
        Mono passthrough = Mono::unit(target->size());
        for (std::size_t v = 0; v < m.e.size(); ++v) {
            if (m.e[v] == 0) continue;
            if (images.count(v)) continue;
            if (!remap[v])
                throw PreconditionError("variable " + p.table()->name(v) +
                                        " missing from substitution target table");
            passthrough.e[*remap[v]] += m.e[v];
            passthrough.deg += m.e[v];
        }
        if (!passthrough.is_unit()) acc = acc * Poly::monomial(target, passthrough, Rat(1));
        for (std::size_t v = 0; v < m.e.size(); ++v) {
            if (m.e[v] == 0 || !images.count(v)) continue;
            acc = bounded ? acc.mul_trunc(image_pow(v, m.e[v]), bound) : acc * image_pow(v, m.e[v]);
            if (acc.is_zero()) break;
        }
        out.add(acc);
    }
    return out.take();
}

} // namespace

Poly Poly::substituted(const std::map<std::size_t, Poly>& images) const {
    return substituted_impl(*this, images, 0, false);
}

Poly Poly::substituted(const std::map<std::string, Poly>& images_by_name) const {
    std::map<std::size_t, Poly> images;
    for (const auto& [name, img] : images_by_name) images.emplace(table_->index_of(name), img);
    return substituted_impl(*this, images, 0, false);
}

Poly Poly::substituted_trunc(const std::map<std::size_t, Poly>& images, std::int64_t bound) const {
    return substituted_impl(*this, images, bound, true);
}

Poly Poly::on_table(const TablePtr& table) const {
    if (table_->same_as(*table)) {
        Poly r = *this;
        r.table_ = table;
        return r;
    }
    std::vector<std::optional<std::size_t>> remap(table_->size());
    for (std::size_t i = 0; i < table_->size(); ++i) remap[i] = table->find(table_->name(i));
    Poly r(table);
    for (const auto& [m, c] : terms_) {
        Mono m2 = Mono::unit(table->size());
        for (std::size_t i = 0; i < m.e.size(); ++i) {
            if (m.e[i] == 0) continue;
            if (!remap[i])
                throw PreconditionError("variable " + table_->name(i) + " missing from target table");
            m2.e[*remap[i]] = m.e[i];
        }
        m2.deg = m.deg;
        r.add_term(m2, c);
    }
    return r;
}

Poly Poly::dehomogenized(std::size_t var) const {
    return substituted(std::map<std::size_t, Poly>{{var, Poly::constant(table_, Rat(1))}});
}

Poly Poly::homogenized(std::size_t var, std::int64_t d) const {
    if (depends_on(var)) throw PreconditionError("input already involves the padding variable");
    Poly out(table_);
    for (const auto& [m, c] : terms_) {
        if (m.deg > d)
            throw PreconditionError("term of degree " + std::to_string(m.deg) +
                                    " exceeds the homogenization degree " + std::to_string(d));
        Mono m2 = m;
        m2.e[var] = static_cast<std::int32_t>(d - m.deg);
        m2.deg = d;
        out.add_term(m2, c);
    }
    return out;
}

std::string Poly::render() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        Rat a = c.abs();
        if (first) {
            if (c.sign() < 0) out += "-";
            first = false;
        } else {
            out += c.sign() < 0 ? " - " : " + ";
        }
        std::string monos;
        for (std::size_t i = 0; i < m.e.size(); ++i) {
            if (m.e[i] == 0) continue;
            if (!monos.empty()) monos += "*";
            monos += table_->name(i);
            if (m.e[i] != 1) monos += "^" + std::to_string(m.e[i]);
        }
        if (monos.empty()) {
            out += a.to_string();
        } else if (a.is_one()) {
            out += monos;
        } else {
            out += a.to_string() + "*" + monos;
        }
    }
    return out;
}

namespace {

// Leading-term long division step helper.
bool mono_divides(const Mono& a, const Mono& b) { // a | b
    for (std::size_t i = 0; i < a.e.size(); ++i)
        if (a.e[i] > b.e[i]) return false;
    return true;
}

Mono mono_quotient(const Mono& b, const Mono& a) {
    Mono q = b;
    for (std::size_t i = 0; i < q.e.size(); ++i) q.e[i] -= a.e[i];
    q.deg = b.deg - a.deg;
    return q;
}

} // namespace

Poly Poly::divide_exact(const Poly& d) const {
    check_same_table(d);
    if (d.is_zero()) throw PreconditionError("division by the zero polynomial");
    Poly rem = *this;
    Poly quot(table_);
    const auto& [dm, dc] = *d.terms_.begin();
    while (!rem.is_zero()) {
        const auto& [rm, rc] = *rem.terms_.begin();
        if (!mono_divides(dm, rm))
            throw PreconditionError("inexact polynomial division");
        Mono qm = mono_quotient(rm, dm);
        Rat qc = rc / dc;
        Poly t = Poly::monomial(table_, qm, qc);
        quot = quot + t;
        rem = rem - t * d;
    }
    return quot;
}

bool Poly::divisible_by(const Poly& d) const {
    check_same_table(d);
    if (d.is_zero()) return is_zero();
    Poly rem = *this;
    const auto& [dm, dc] = *d.terms_.begin();
    while (!rem.is_zero()) {
        const auto& [rm, rc] = *rem.terms_.begin();
        if (!mono_divides(dm, rm)) return false;
        Poly t = Poly::monomial(table_, mono_quotient(rm, dm), rc / dc);
        rem = rem - t * d;
    }
    return true;
}

} // namespace canlink
