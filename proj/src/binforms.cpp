#include "canlink/binforms.hpp"

#include <algorithm>

#include "canlink/errors.hpp"

namespace canlink {

namespace {

// A binary form is handled through its two-variable shape: indices (vy, vz)
// with vy < vz in table order, the valuations in each, and the univariate
// core c(Y) = (p / y^valy / z^valz)(Y, 1), which has a non-zero constant
// term and full degree.
struct BinShape {
    std::size_t vy = 0, vz = 0;
    bool has_two = false;
};

BinShape shape_of(const Poly& a, const Poly& b) {
    BinShape s;
    std::vector<std::size_t> used;
    auto collect = [&](const Poly& p) {
        for (std::size_t v = 0; v < p.table()->size(); ++v)
            if (p.depends_on(v) && std::find(used.begin(), used.end(), v) == used.end())
                used.push_back(v);
    };
    collect(a);
    collect(b);
    std::sort(used.begin(), used.end());
    if (used.size() > 2)
        throw PreconditionError("binary-form operation on a polynomial in more than two variables");
    if (used.size() == 2) {
        s.vy = used[0];
        s.vz = used[1];
        s.has_two = true;
    } else if (used.size() == 1) {
        s.vy = used[0];
        s.vz = used[0];
    }
    return s;
}

void check_homogeneous(const Poly& p) {
    if (p.is_zero()) return;
    if (!p.is_homogeneous(Weighting(p.table()->size(), 1), p.degree()))
        throw PreconditionError("binary-form operation on an inhomogeneous polynomial");
}

// Univariate polynomial over Q as a dense coefficient vector, c[i] the
// coefficient of Y^i. Trailing zeros trimmed; empty means zero.
using UPoly = std::vector<Rat>;

UPoly trim(UPoly u) {
    while (!u.empty() && u.back().is_zero()) u.pop_back();
    return u;
}

int udeg(const UPoly& u) { return static_cast<int>(u.size()) - 1; }

UPoly uderiv(const UPoly& u) {
    UPoly d;
    for (std::size_t i = 1; i < u.size(); ++i) d.push_back(u[i] * Rat((long)i));
    return trim(d);
}

UPoly urem(UPoly a, const UPoly& b) {
    a = trim(a);
    while (udeg(a) >= udeg(b)) {
        Rat f = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= f * b[i];
        a = trim(a);
    }
    return a;
}

UPoly ugcd(UPoly a, UPoly b) {
    a = trim(a);
    b = trim(b);
    while (!b.empty()) {
        UPoly r = urem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        Rat lead = a.back();
        for (auto& c : a) c /= lead;
    }
    return a;
}

UPoly udiv_exact(UPoly a, const UPoly& b) {
    a = trim(a);
    UPoly q(a.empty() ? 0 : a.size(), Rat(0));
    while (!a.empty() && udeg(a) >= udeg(b)) {
        Rat f = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        q[shift] = f;
        for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= f * b[i];
        a = trim(a);
    }
    if (!a.empty()) throw InternalCheckError("inexact univariate division");
    return trim(q);
}

// Decompose a non-zero binary form: valuations and univariate core.
struct BinData {
    std::int32_t valy = 0, valz = 0;
    UPoly core; // non-zero constant term, degree = deg(p) - valy - valz
};

BinData decompose(const Poly& p, const BinShape& s) {
    BinData d;
    d.valy = p.valuation_in(s.vy);
    d.valz = s.has_two ? p.valuation_in(s.vz) : 0;
    std::int64_t deg = p.degree();
    std::int64_t core_deg = deg - d.valy - d.valz;
    d.core.assign(core_deg + 1, Rat(0));
    for (const auto& [m, c] : p.terms()) {
        std::int64_t ey = m.e[s.vy] - d.valy;
        d.core.at(ey) = c;
    }
    return d;
}

// Rebuild y^valy * z^valz * homogenization(core) on p's table.
Poly recompose(const TablePtr& table, const BinShape& s, std::int32_t valy, std::int32_t valz,
               const UPoly& core) {
    Poly out(table);
    int n = udeg(core);
    for (int i = 0; i <= n; ++i) {
        if (core[i].is_zero()) continue;
        Mono m = Mono::unit(table->size());
        m.e[s.vy] = valy + i;
        if (s.has_two) m.e[s.vz] = valz + (n - i);
        m.deg = m.e[s.vy] + (s.has_two ? m.e[s.vz] : 0);
        out = out + Poly::monomial(table, m, core[i]);
    }
    return out;
}

// Divide by the leading coefficient under the ordering vy < vz: the first
// non-zero coefficient scanning from the highest vz-power downward.
Poly monic_y_lt_z(Poly p, const BinShape& s) {
    if (p.is_zero()) return p;
    const Mono* best = nullptr;
    for (const auto& [m, c] : p.terms()) {
        if (!best) {
            best = &m;
            continue;
        }
        std::int32_t mz = s.has_two ? m.e[s.vz] : 0;
        std::int32_t bz = s.has_two ? best->e[s.vz] : 0;
        if (mz > bz || (mz == bz && m.e[s.vy] > best->e[s.vy])) best = &m;
    }
    return p.scaled(p.coeff(*best).inverse());
}

} // namespace

Poly binary_gcd(const Poly& a, const Poly& b) {
    a.check_same_table(b);
    if (a.is_zero() && b.is_zero())
        throw PreconditionError("gcd of two zero polynomials is undefined");
    check_homogeneous(a);
    check_homogeneous(b);
    BinShape s = shape_of(a, b);
    if (a.is_zero()) return monic_y_lt_z(b, s);
    if (b.is_zero()) return monic_y_lt_z(a, s);
    BinData da = decompose(a, s), db = decompose(b, s);
    UPoly core = ugcd(da.core, db.core);
    Poly g = recompose(a.table(), s, std::min(da.valy, db.valy), std::min(da.valz, db.valz), core);
    return monic_y_lt_z(g, s);
}

bool is_squarefree(const Poly& p) {
    if (p.is_zero()) return false;
    check_homogeneous(p);
    BinShape s = shape_of(p, p);
    BinData d = decompose(p, s);
    if (d.valy > 1 || d.valz > 1) return false;
    if (udeg(d.core) <= 0) return true;
    return udeg(ugcd(d.core, uderiv(d.core))) == 0;
}

Poly radical(const Poly& p) {
    if (p.is_zero()) throw PreconditionError("radical of the zero form");
    check_homogeneous(p);
    BinShape s = shape_of(p, p);
    BinData d = decompose(p, s);
    UPoly sf = d.core;
    if (udeg(d.core) > 0) sf = udiv_exact(d.core, ugcd(d.core, uderiv(d.core)));
    return monic_y_lt_z(
        recompose(p.table(), s, d.valy > 0 ? 1 : 0, d.valz > 0 ? 1 : 0, sf), s);
}

std::int64_t distinct_root_count(const Poly& p) {
    if (p.is_zero()) throw PreconditionError("root count of the zero form");
    return radical(p).degree();
}

std::int64_t common_distinct_root_count(const Poly& a, const Poly& b) {
    if (a.is_zero() && b.is_zero())
        throw PreconditionError("common roots of two zero forms are undefined");
    if (a.is_zero()) return distinct_root_count(b);
    if (b.is_zero()) return distinct_root_count(a);
    if (a.degree() == 0 || b.degree() == 0) return 0;
    return binary_gcd(radical(a), radical(b)).degree();
}

Poly resultant(const Poly& a, const Poly& b, std::size_t var) {
    a.check_same_table(b);
    const TablePtr& table = a.table();
    if (a.is_zero() || b.is_zero()) return Poly::zero(table);
    std::int32_t da = a.degree_in(var), db = b.degree_in(var);
    if (da == 0 && db == 0) return Poly::constant(table, Rat(1));
    if (da == 0) return a.pow(db);
    if (db == 0) return b.pow(da);

    // Sylvester matrix with polynomial entries; determinant by fraction-free
    // Bareiss elimination (all divisions exact over an integral domain).
    std::size_t n = da + db;
    std::vector<std::vector<Poly>> m(n, std::vector<Poly>(n, Poly::zero(table)));
    for (std::int32_t r = 0; r < db; ++r)
        for (std::int32_t k = 0; k <= da; ++k) m[r][r + k] = a.coeff_of(var, da - k);
    for (std::int32_t r = 0; r < da; ++r)
        for (std::int32_t k = 0; k <= db; ++k) m[db + r][r + k] = b.coeff_of(var, db - k);

    Poly prev = Poly::constant(table, Rat(1));
    int sign = 1;
    for (std::size_t col = 0; col + 1 < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && m[pivot][col].is_zero()) ++pivot;
        if (pivot == n) return Poly::zero(table);
        if (pivot != col) {
            std::swap(m[pivot], m[col]);
            sign = -sign;
        }
        for (std::size_t row = col + 1; row < n; ++row) {
            for (std::size_t j = col + 1; j < n; ++j) {
                Poly num = m[col][col] * m[row][j] - m[row][col] * m[col][j];
                m[row][j] = num.divide_exact(prev);
            }
            m[row][col] = Poly::zero(table);
        }
        prev = m[col][col];
    }
    Poly det = m[n - 1][n - 1];
    return sign < 0 ? -det : det;
}

} // namespace canlink
