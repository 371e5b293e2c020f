#include "canlink/singularity.hpp"

#include <algorithm>
#include <numeric>

#include "canlink/errors.hpp"

namespace canlink {

namespace {

// Square part of an integer by trial division (with a perfect-square check
// on the cofactor), so diagonal coefficients reduce to squarefree integers.
mpz_class square_part(mpz_class n) {
    n = abs(n);
    mpz_class s = 1;
    for (mpz_class d = 2; d * d * d * d <= n && d < 100000; ++d) {
        mpz_class dd = d * d;
        while (n % dd == 0) {
            n /= dd;
            s *= d;
        }
    }
    if (n > 1 && mpz_perfect_square_p(n.get_mpz_t())) {
        mpz_class r;
        mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
        s *= r;
    }
    return s;
}

// Exact square root when r is a square of a rational; nullopt otherwise.
std::optional<Rat> rat_sqrt(const Rat& r) {
    if (r.sign() < 0) return std::nullopt;
    mpz_class n = r.numerator(), d = r.denominator();
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t()))
        return std::nullopt;
    mpz_class sn, sd;
    mpz_sqrt(sn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(sd.get_mpz_t(), d.get_mpz_t());
    return Rat(sn, sd);
}

} // namespace

QuadDiagonalization quad_diagonalize(const Poly& f) {
    const TablePtr& table = f.table();
    std::size_t n = table->size();
    Weighting ones(n, 1);
    if (!f.graded_part(ones, 0).is_zero() || !f.graded_part(ones, 1).is_zero())
        throw PreconditionError("quad_diagonalize requires zero constant and linear part");

    // Gram matrix of the quadratic part.
    QMat G(n, n);
    Poly quad2 = f.graded_part(ones, 2);
    for (const auto& [m, c] : quad2.terms()) {
        std::size_t i = 0, j = 0;
        int seen = 0;
        for (std::size_t v = 0; v < n; ++v) {
            if (m.e[v] == 2) { i = j = v; seen = 2; }
            else if (m.e[v] == 1) { (seen++ ? j : i) = v; }
        }
        (void)seen;
        if (i == j) G.at(i, i) = c;
        else { G.at(i, j) = c * Rat(1, 2); G.at(j, i) = c * Rat(1, 2); }
    }

    QMat C = QMat::identity(n);
    // Congruence column op x_j <- x_j + c x_i, mirrored on rows.
    auto add_op = [&](std::size_t i, std::size_t j, const Rat& c) {
        for (std::size_t r = 0; r < n; ++r) G.at(r, j) += c * G.at(r, i);
        for (std::size_t r = 0; r < n; ++r) G.at(j, r) += c * G.at(i, r);
        for (std::size_t r = 0; r < n; ++r) C.at(r, j) += c * C.at(r, i);
    };
    auto swap_op = [&](std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t r = 0; r < n; ++r) std::swap(G.at(r, i), G.at(r, j));
        for (std::size_t r = 0; r < n; ++r) std::swap(G.at(i, r), G.at(j, r));
        for (std::size_t r = 0; r < n; ++r) std::swap(C.at(r, i), C.at(r, j));
    };

    int rank = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (G.at(k, k).is_zero()) {
            std::size_t l = k + 1;
            while (l < n && G.at(l, l).is_zero()) ++l;
            if (l < n) {
                swap_op(k, l);
            } else {
                // All remaining diagonal entries vanish; hunt an off-diagonal.
                bool found = false;
                for (std::size_t a = k; a < n && !found; ++a)
                    for (std::size_t b = a + 1; b < n && !found; ++b)
                        if (!G.at(a, b).is_zero()) {
                            swap_op(k, a); // entry now at (k, b), b > a >= k
                            add_op(b, k, Rat(1));
                            found = true;
                        }
                if (!found) break;
            }
        }
        Rat pivot = G.at(k, k);
        for (std::size_t j = k + 1; j < n; ++j) {
            if (G.at(k, j).is_zero()) continue;
            add_op(k, j, -(G.at(k, j) / pivot));
        }
        ++rank;
    }

    // Reduce each diagonal entry to a squarefree integer by rescaling.
    std::vector<Rat> lambdas;
    for (int k = 0; k < rank; ++k) {
        Rat lam = G.at(k, k);
        mpz_class pq = lam.numerator() * lam.denominator();
        mpz_class s = square_part(pq);
        Rat scale = Rat(lam.denominator(), s); // lam * scale^2 squarefree integer
        for (std::size_t r = 0; r < n; ++r) C.at(r, k) *= scale;
        G.at(k, k) = lam * scale * scale;
        lambdas.push_back(G.at(k, k));
    }

    QuadDiagonalization out;
    out.rank = rank;
    out.change = C;
    out.lambdas = std::move(lambdas);

    // The linear_change interface wants row i = image of variable i.
    std::vector<std::vector<Rat>> rows(n, std::vector<Rat>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) rows[i][j] = C.at(i, j);
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    out.f_prime = linear_change(f, all, rows);

    // Cross-check the quadratic part really is sum lambda_k x_k^2.
    Poly expect = Poly::zero(table);
    for (int k = 0; k < rank; ++k)
        expect = expect + Poly::variable(table, k, 2).scaled(out.lambdas[k]);
    if (out.f_prime.graded_part(ones, 2) != expect)
        throw InternalCheckError("quadratic diagonalization failed to diagonalize");
    return out;
}

std::optional<QMat> hyperbolic_change(const QuadDiagonalization& d, const Poly& f) {
    if (d.rank < 2) return std::nullopt;
    auto c = rat_sqrt(-(d.lambdas[1] / d.lambdas[0]));
    if (!c || c->is_zero()) return std::nullopt;
    std::size_t n = f.table()->size();
    QMat M = QMat::identity(n);
    Rat l1 = d.lambdas[0];
    // x1 -> x1/(2 l1) + x2/2,  x2 -> -x1/(2 l1 c) + x2/(2 c): takes
    // l1 x1^2 + l2 x2^2 to x1 x2.
    M.at(0, 0) = Rat(1) / (Rat(2) * l1);
    M.at(0, 1) = Rat(1, 2);
    M.at(1, 0) = -(Rat(1) / (Rat(2) * l1 * *c));
    M.at(1, 1) = Rat(1) / (Rat(2) * *c);
    return M;
}

GermReport classify_cAn(const GermPresentation& germ) {
    const TablePtr& table = germ.f.table();
    std::size_t n = table->size();
    Weighting ones(n, 1);

    Poly f = germ.f;
    if (!germ.base_point.empty()) {
        if (germ.base_point.size() != n)
            throw PreconditionError("base point length does not match variable count");
        std::map<std::size_t, Poly> shift;
        for (std::size_t i = 0; i < n; ++i)
            shift.emplace(i, Poly::variable(table, i) + Poly::constant(table, germ.base_point[i]));
        f = f.substituted(shift);
    }
    if (!f.graded_part(ones, 0).is_zero())
        throw PreconditionError("germ does not vanish at the base point");

    GermReport rep;
    if (!f.graded_part(ones, 1).is_zero()) {
        rep.kind = GermKind::Smooth;
        rep.detail = "non-zero linear part: the point is smooth";
        return rep;
    }

    rep.diag = quad_diagonalize(f);
    rep.quad_rank = rep.diag.rank;
    if (rep.quad_rank < 2) {
        rep.kind = GermKind::NotCA;
        rep.detail = "quadratic rank " + std::to_string(rep.quad_rank) + " (corank > 2): not cA";
        return rep;
    }

    // Split off the first two squares. Unit rescalings of f do not change
    // the germ, so normalize each pivot coefficient to 1 before splitting.
    std::int64_t N = germ.trunc_degree;
    Poly cur = rep.diag.f_prime.scaled(rep.diag.lambdas[0].inverse());
    SplitEngine e1(cur, 0, {});
    Poly h1 = e1.h_trunc(N);
    Rat lam2 = rep.diag.lambdas[1] / rep.diag.lambdas[0];
    SplitEngine e2(h1.scaled(lam2.inverse()), 1, {});
    Poly h2 = e2.h_trunc(N);

    rep.residual_h = h2;
    if (h2.is_zero()) {
        rep.kind = GermKind::IndexAtLeast;
        rep.index = N;
        rep.detail = "residual vanishes to the truncation degree " + std::to_string(N) +
                     "; only index >= " + std::to_string(N) + " is certified";
        return rep;
    }
    rep.kind = GermKind::Index;
    rep.index = *h2.multiplicity() - 1;
    return rep;
}

void KawakitaWeights::validate() const {
    if (r1 < r2 || r2 < 1) throw PreconditionError("Kawakita weights need r1 >= r2 >= 1");
    if (a < 1 || (r1 + r2) % a != 0) throw PreconditionError("a must divide r1 + r2");
    if (std::gcd(a, r1) != 1 || std::gcd(a, r2) != 1)
        throw PreconditionError("a must be coprime to r1 and r2");
    if (n() < 2) throw PreconditionError("Kawakita weights need n = (r1 + r2)/a - 1 >= 2");
}

KawakitaVerdict kawakita_check(const Poly& f, const std::vector<std::size_t>& vars,
                               const KawakitaWeights& kw) {
    KawakitaVerdict out;
    try {
        kw.validate();
        out.invariants_ok = true;
    } catch (const PreconditionError& e) {
        out.detail = e.what();
        return out;
    }
    if (vars.size() != 4) throw PreconditionError("kawakita_check needs four coordinates");

    const TablePtr& table = f.table();
    Weighting w(table->size(), 0);
    w[vars[0]] = kw.r1;
    w[vars[1]] = kw.r2;
    w[vars[2]] = kw.a;
    w[vars[3]] = 1;

    auto wt = f.weight(w);
    std::int64_t target = kw.r1 + kw.r2;
    if (wt && *wt == target) {
        out.weight_ok = true;
    } else if (wt && *wt < target) {
        std::string offending;
        for (std::int64_t d = *wt; d < target; ++d) {
            Poly part = f.graded_part(w, d);
            if (!part.is_zero())
                offending += " [weight " + std::to_string(d) + "] " + part.render() + ";";
        }
        out.detail = "weight " + std::to_string(*wt) + " < " + std::to_string(target) +
                     "; low-weight terms:" + offending;
    } else {
        out.detail = "weight " + (wt ? std::to_string(*wt) : std::string("infinity")) +
                     " != " + std::to_string(target);
    }

    // Normal-form-only check: f = x1 x2 + g(x3, x4).
    Poly x1x2 = Poly::variable(table, vars[0]) * Poly::variable(table, vars[1]);
    Poly g = f - x1x2;
    if (!g.depends_on(vars[0]) && !g.depends_on(vars[1])) {
        std::int64_t k = target / kw.a; // n + 1
        Mono m = Mono::unit(table->size());
        m.e[vars[2]] = static_cast<std::int32_t>(k);
        m.deg = k;
        out.monomial_ok = !f.coeff(m).is_zero();
        if (!*out.monomial_ok) {
            out.detail += std::string(out.detail.empty() ? "" : " ") + "monomial " +
                          table->name(vars[2]) + "^" + std::to_string(k) + " absent";
            if (kw.a == 1) {
                // With weight a = 1 a linear change can produce the monomial
                // exactly when the residual has a term of total degree n + 1.
                Weighting ones(table->size(), 0);
                ones[vars[2]] = 1;
                ones[vars[3]] = 1;
                auto mult = g.weight(ones);
                if (mult && *mult == k)
                    out.detail += " (arrangeable by a linear change: residual multiplicity " +
                                  std::to_string(k) + ")";
            }
        }
    }
    return out;
}

BlowupPresentation build_blowup_ideal(const Poly& f, const std::vector<std::size_t>& vars,
                                      const KawakitaWeights& kw) {
    kw.validate();
    if (vars.size() != 4) throw PreconditionError("build_blowup_ideal needs four coordinates");
    const TablePtr& table = f.table();
    Weighting ones(table->size(), 1);

    Poly quad_expect = Poly::variable(table, vars[1], 2) - Poly::variable(table, vars[0], 2);
    if (f.graded_part(ones, 2) != quad_expect || !f.graded_part(ones, 0).is_zero() ||
        !f.graded_part(ones, 1).is_zero())
        throw PreconditionError("build_blowup_ideal expects f = -x1^2 + x2^2 + F, mult F >= 3");

    std::int64_t N = 2 * (kw.r1 + kw.r2);

    // Split -f with respect to x1 (yields q and the unit w), then the
    // residual with respect to x2 (yields p and v).
    SplitRequest req1{-f, vars[0], N, {}};
    SplitSeries s1 = split(req1);
    SplitRequest req2{-s1.h, vars[1], N, {}};
    SplitSeries s2 = split(req2);
    const Poly& q = s1.p;
    const Poly& wu = s1.v;
    const Poly& p = s2.p;
    const Poly& vu = s2.v;

    std::int64_t mult_q = q.is_zero() ? kw.r2 : std::min<std::int64_t>(kw.r2, *q.multiplicity());
    std::int64_t mult_p = p.is_zero() ? kw.r2 : std::min<std::int64_t>(kw.r2, *p.multiplicity());

    // Extended table: alpha, beta in front, original variables after.
    std::vector<std::string> names = {"alpha", "beta"};
    for (const auto& nm : table->names()) names.push_back(nm);
    TablePtr ext = VarTable::make(names);

    Weighting wprime(ext->size(), 0);
    wprime[0] = kw.r1;
    wprime[1] = kw.r2;
    wprime[2 + vars[0]] = mult_q;
    wprime[2 + vars[1]] = mult_p;
    wprime[2 + vars[2]] = kw.a;
    wprime[2 + vars[3]] = 1;

    auto lift = [&](const Poly& poly) { return poly.on_table(ext); };
    auto trunc_below = [&](const Poly& poly, std::int64_t bound) {
        return bound <= 0 ? Poly::zero(ext) : lift(poly).weighted_truncated(wprime, bound - 1);
    };

    Poly x1 = Poly::variable(ext, 2 + vars[0]);
    Poly x2 = Poly::variable(ext, 2 + vars[1]);
    Poly alpha = Poly::variable(ext, 0);
    Poly beta = Poly::variable(ext, 1);
    Poly one = Poly::constant(ext, Rat(1));

    Poly v_trunc = kw.r1 == kw.r2 ? one : trunc_below(vu, kw.r1 - kw.r2);
    Poly w_trunc = kw.r1 == mult_q ? one : trunc_below(wu, kw.r1 - mult_q);
    Poly p_r1 = trunc_below(p, kw.r1);
    Poly p_r2 = trunc_below(p, kw.r2);
    Poly q_r1 = trunc_below(q, kw.r1);

    BlowupPresentation out;
    out.table = ext;
    out.ambient_weights = wprime;

    Poly F_ext = lift(f) + x1 * x1 - x2 * x2;
    bool F_x1_free = !F_ext.depends_on(2 + vars[0]);
    Poly alpha_section = (x1 + q_r1) * w_trunc + (x2 + p_r1) * v_trunc;
    Poly beta_section = x2 + p_r2;

    if (F_x1_free && kw.r1 == kw.r2) {
        out.shape = BlowupPresentation::Shape::JPrime;
        out.generators = {lift(f), -beta + beta_section};
    } else if (F_x1_free) {
        out.shape = BlowupPresentation::Shape::J;
        Poly inner = alpha - (x2 + p_r1) * v_trunc;
        out.generators = {-(inner * inner) + x2 * x2 + F_ext, -beta + beta_section};
    } else {
        out.shape = BlowupPresentation::Shape::FullI;
        out.generators = {lift(f), -alpha + alpha_section, -beta + beta_section};
    }
    out.section_map.emplace("alpha", alpha_section);
    out.section_map.emplace("beta", beta_section);

    // Eliminating alpha, beta through the section map must recover (f, 0, ..).
    std::map<std::size_t, Poly> sect{{0, alpha_section}, {1, beta_section}};
    for (std::size_t i = 0; i < out.generators.size(); ++i) {
        Poly back = out.generators[i].substituted(sect);
        Poly expect = i == 0 ? lift(f) : Poly::zero(ext);
        if (back != expect)
            throw InternalCheckError("blowup ideal section check failed on generator " +
                                     std::to_string(i));
    }
    return out;
}

std::pair<Poly, std::int64_t> pullback_chart(const Poly& g, const Weighting& w,
                                             std::size_t chart_var) {
    if (g.is_zero()) throw PreconditionError("pullback of the zero polynomial");
    if (g.depends_on(chart_var))
        throw PreconditionError("input already involves the chart variable");
    Weighting wz = w;
    wz[chart_var] = 0;
    std::int64_t order = *g.weight(wz);
    Poly out(g.table());
    for (const auto& [m, c] : g.terms()) {
        Mono m2 = m;
        std::int64_t bump = m.weighted_deg(wz) - order;
        m2.e[chart_var] += static_cast<std::int32_t>(bump);
        m2.deg += bump;
        out = out + Poly::monomial(g.table(), m2, c);
    }
    return {out, order};
}

Poly solve_series(const Poly& equation, std::size_t var, std::int64_t N) {
    const TablePtr& table = equation.table();
    Weighting ones(table->size(), 1);
    if (!equation.graded_part(ones, 0).is_zero())
        throw PreconditionError("solve_series needs a vanishing constant term");
    Poly lin = equation.coeff_of(var, 1).graded_part(ones, 0);
    if (lin.is_zero())
        throw PreconditionError("solve_series needs an invertible linear coefficient of " +
                                table->name(var));
    Rat c = lin.constant_value();
    // equation = c*var + G; iterate s <- -G(var -> s)/c. Each pass fixes one
    // more degree, so N rounds suffice.
    Poly G = equation - Poly::variable(table, var).scaled(c);
    Poly s = Poly::zero(table);
    for (std::int64_t round = 0; round <= N; ++round) {
        std::map<std::size_t, Poly> at{{var, s}};
        Poly next = (-G.substituted_trunc(at, N)).scaled(c.inverse()).truncated(N);
        if (next == s) break;
        s = next;
    }
    std::map<std::size_t, Poly> at{{var, s}};
    if (!equation.substituted_trunc(at, N).is_zero())
        throw InternalCheckError("solve_series failed to converge at degree " + std::to_string(N));
    return s;
}

std::int64_t type_in_coordinates(const Poly& g, std::size_t x3, std::size_t x4) {
    if (g.is_zero()) throw PreconditionError("type of the zero residual");
    for (std::size_t v = 0; v < g.table()->size(); ++v)
        if (v != x3 && v != x4 && g.depends_on(v))
            throw PreconditionError("residual involves variables other than x3, x4");
    std::int64_t k = *g.multiplicity(); // n + 1
    if (!g.depends_on(x4) || g.valuation_in(x3) >= k)
        throw PreconditionError("type unbounded in these coordinates (x3^mult divides g)");
    std::int64_t best = 1;
    for (std::int64_t a = 1; a <= g.degree(); ++a) {
        Weighting w(g.table()->size(), 0);
        w[x3] = a;
        w[x4] = 1;
        if (*g.weight(w) == a * k) best = a;
    }
    return best;
}

} // namespace canlink
