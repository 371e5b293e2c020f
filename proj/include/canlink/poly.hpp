#ifndef CANLINK_POLY_HPP
#define CANLINK_POLY_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "canlink/rational.hpp"
#include "canlink/vartable.hpp"

namespace canlink {

// Exponent vector aligned with a VarTable; total degree cached.
struct Mono {
    std::vector<std::int32_t> e;
    std::int64_t deg = 0;

    static Mono unit(std::size_t nvars) { return Mono{std::vector<std::int32_t>(nvars, 0), 0}; }
    static Mono of(std::vector<std::int32_t> exps) {
        Mono m;
        m.e = std::move(exps);
        for (auto x : m.e) m.deg += x;
        return m;
    }
    bool is_unit() const { return deg == 0; }
    std::int64_t weighted_deg(const Weighting& w) const {
        std::int64_t d = 0;
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i]) d += w[i] * e[i];
        return d;
    }
    friend Mono operator*(const Mono& a, const Mono& b) {
        Mono m = a;
        for (std::size_t i = 0; i < m.e.size(); ++i) m.e[i] += b.e[i];
        m.deg += b.deg;
        return m;
    }
    friend bool operator==(const Mono& a, const Mono& b) { return a.deg == b.deg && a.e == b.e; }
};

// Graded reverse lexicographic order over the table's variable order,
// leading monomial first. Internal convention only; any total order works.
struct MonoGrevlexGreater {
    bool operator()(const Mono& a, const Mono& b) const {
        if (a.deg != b.deg) return a.deg > b.deg;
        for (std::size_t i = a.e.size(); i-- > 0;) {
            if (a.e[i] != b.e[i]) return a.e[i] < b.e[i];
        }
        return false;
    }
};

// Sparse multivariate polynomial with exact rational coefficients over a
// shared VarTable. No zero coefficients stored; terms kept in one fixed
// canonical order; equality is structural. Immutable by convention: all
// operations return new values.
class Poly {
  public:
    using TermMap = std::map<Mono, Rat, MonoGrevlexGreater>;

    Poly() = default;
    explicit Poly(TablePtr table) : table_(std::move(table)) {}

    static Poly zero(TablePtr table) { return Poly(std::move(table)); }
    static Poly constant(TablePtr table, const Rat& c);
    static Poly variable(TablePtr table, std::size_t var, std::int32_t power = 1);
    static Poly monomial(TablePtr table, Mono m, const Rat& c);

    const TablePtr& table() const { return table_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_unit()); }
    Rat constant_value() const; // requires is_constant()

    // Total degree of the leading term; -1 for zero.
    std::int64_t degree() const { return terms_.empty() ? -1 : terms_.begin()->first.deg; }

    Rat coeff(const Mono& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rat(0) : it->second;
    }

    Poly operator-() const;
    friend Poly operator+(const Poly& a, const Poly& b);
    friend Poly operator-(const Poly& a, const Poly& b);
    friend Poly operator*(const Poly& a, const Poly& b);
    friend bool operator==(const Poly& a, const Poly& b);
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    Poly scaled(const Rat& c) const;
    Poly pow(std::int64_t k) const;

    // Product/power with all terms of total degree > bound dropped.
    Poly mul_trunc(const Poly& o, std::int64_t bound) const;
    Poly pow_trunc(std::int64_t k, std::int64_t bound) const;
    Poly truncated(std::int64_t bound) const;
    // Product with terms of weighted degree > bound dropped; exact on the
    // part of weighted degree <= bound since weights are non-negative.
    Poly mul_trunc_weighted(const Poly& o, const Weighting& w, std::int64_t bound) const;

    // Least weighted degree among terms; nullopt (= infinity) for zero.
    std::optional<std::int64_t> weight(const Weighting& w) const;
    std::optional<std::int64_t> multiplicity() const;

    // Sum of the terms of weighted degree exactly d.
    Poly graded_part(const Weighting& w, std::int64_t d) const;
    // Terms of total degree <= bound under the weighting.
    Poly weighted_truncated(const Weighting& w, std::int64_t bound) const;

    // The weighted-degree-d homogeneous part of the coefficient of var^i;
    // contains no var. This is the f_{i,d} of the splitting recurrences.
    Poly coeff_slice(std::size_t var, std::int32_t i, std::int64_t d, const Weighting& w) const;
    Poly coeff_slice(std::size_t var, std::int32_t i, std::int64_t d) const;
    // Full polynomial coefficient of var^i.
    Poly coeff_of(std::size_t var, std::int32_t i) const;

    std::int32_t degree_in(std::size_t var) const;
    std::int32_t valuation_in(std::size_t var) const; // min exponent over terms; 0 for zero poly
    bool depends_on(std::size_t var) const;
    bool is_homogeneous(const Weighting& w, std::int64_t d) const;

    Poly derivative(std::size_t var) const;

    // Simultaneous substitution, fully expanded. Images must share one table
    // (defaults to this poly's table when the map is empty); variables of
    // this poly that are not substituted must exist by name in that table.
    Poly substituted(const std::map<std::size_t, Poly>& images) const;
    Poly substituted(const std::map<std::string, Poly>& images_by_name) const;
    // Same, dropping every intermediate term of total degree > bound.
    Poly substituted_trunc(const std::map<std::size_t, Poly>& images, std::int64_t bound) const;

    // Re-express over another table; maps variables by name.
    Poly on_table(const TablePtr& table) const;

    // Affine <-> homogeneous with respect to one variable: dehomogenized
    // sets var = 1; homogenized pads every term with var-powers up to total
    // degree d (error when a term already exceeds d or involves var).
    Poly dehomogenized(std::size_t var) const;
    Poly homogenized(std::size_t var, std::int64_t d) const;

    // Deterministic canonical rendering; parse(render(p)) == p.
    std::string render() const;

    // Exact division; throws PreconditionError when the division leaves a
    // remainder or the divisor is zero.
    Poly divide_exact(const Poly& d) const;
    bool divisible_by(const Poly& d) const;

    void check_same_table(const Poly& o) const;

  private:
    void add_term(const Mono& m, const Rat& c); // accumulate, erase on zero

    TablePtr table_;
    TermMap terms_;

    friend class PolyBuilder;
};

// Mutable accumulation helper used by the arithmetic kernels.
class PolyBuilder {
  public:
    explicit PolyBuilder(TablePtr table) : p_(std::move(table)) {}
    void add(const Mono& m, const Rat& c) { p_.add_term(m, c); }
    void add(const Poly& q) {
        for (const auto& [m, c] : q.terms()) p_.add_term(m, c);
    }
    Poly take() { return std::move(p_); }

  private:
    Poly p_;
};

// p with vars[i] replaced by sum_j M[i][j] * vars[j]; M square invertible.
Poly linear_change(const Poly& p, const std::vector<std::size_t>& vars,
                   const std::vector<std::vector<Rat>>& M);

// Parse the published polynomial grammar over the given table.
Poly parse_poly(const std::string& text, const TablePtr& table);

// Convenience: table with all-1 weights from names, then parse.
Poly parse_poly(const std::string& text, const std::vector<std::string>& names);

} // namespace canlink

#endif
