#include "canlink/toric.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "canlink/binforms.hpp"
#include "canlink/errors.hpp"
#include "canlink/sds.hpp"
#include "canlink/singularity.hpp"

namespace canlink::toric {

namespace {

// Primitive integer direction of a non-zero rational column.
std::pair<std::int64_t, std::int64_t> primitive(const std::array<Rat, 2>& c) {
    mpz_class l = lcm(c[0].denominator(), c[1].denominator());
    mpz_class a = c[0].numerator() * (l / c[0].denominator());
    mpz_class b = c[1].numerator() * (l / c[1].denominator());
    mpz_class g = gcd(a, b);
    if (g == 0) throw PreconditionError("zero column in the action matrix");
    a /= g;
    b /= g;
    if (!a.fits_slong_p() || !b.fits_slong_p())
        throw ResourceLimitError("ray direction exceeds the machine-integer range");
    return {a.get_si(), b.get_si()};
}

std::int64_t cross(std::pair<std::int64_t, std::int64_t> a,
                   std::pair<std::int64_t, std::int64_t> b) {
    return a.first * b.second - a.second * b.first;
}

Rat dot(const std::pair<std::int64_t, std::int64_t>& r, const std::array<Rat, 2>& c) {
    return c[0] * Rat(r.first) + c[1] * Rat(r.second);
}

std::string wps_name(const std::vector<std::int64_t>& weights) {
    std::string s = "P(";
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(weights[i]);
    }
    return s + ")";
}

} // namespace

TablePtr Rank2Toric::cox_table() const { return VarTable::make(names); }

void Rank2Toric::validate() const {
    if (names.size() != columns.size()) throw PreconditionError("names/columns length mismatch");
    if (names.size() < 2) throw PreconditionError("need at least two variables");
    if (wall == 0 || wall >= names.size())
        throw PreconditionError("irrelevant-ideal wall must split the variables into two blocks");
    for (const auto& c : columns)
        if (c[0].is_zero() && c[1].is_zero()) throw PreconditionError("zero column");
}

Weighting Rank2Toric::pullback_weights() const {
    if (pullback) {
        if (pullback->size() != size()) throw PreconditionError("pullback weighting length mismatch");
        return *pullback;
    }
    if (!exceptional) throw PreconditionError("no exceptional variable recorded");
    std::size_t u = *exceptional;
    // The action row with entry -1 at the exceptional variable (and 0 in the
    // other row) carries the blowup weights.
    int row = -1;
    if (columns[u][0] == Rat(-1) && columns[u][1].is_zero()) row = 0;
    if (columns[u][1] == Rat(-1) && columns[u][0].is_zero()) row = 1;
    if (row < 0)
        throw PreconditionError("exceptional column is not (0,-1); record the pullback weights "
                                "explicitly");
    Weighting w(size(), 0);
    for (std::size_t i = 0; i < size(); ++i) {
        if (i == u) continue;
        const Rat& entry = columns[i][row];
        if (!entry.is_integer() || entry.sign() < 0)
            throw PreconditionError("pullback weight for " + names[i] + " is not a non-negative "
                                    "integer; record the weights explicitly");
        w[i] = static_cast<std::int64_t>(entry.numerator().get_si());
    }
    return w;
}

Rank2Toric normalize(const Rank2Toric& T, const QMat& M) {
    if (M.rows() != 2 || M.cols() != 2) throw PreconditionError("basis change must be 2x2");
    if (M.det().is_zero()) throw PreconditionError("singular basis change");
    Rank2Toric out = T;
    for (std::size_t i = 0; i < T.size(); ++i) {
        out.columns[i][0] = M.at(0, 0) * T.columns[i][0] + M.at(0, 1) * T.columns[i][1];
        out.columns[i][1] = M.at(1, 0) * T.columns[i][0] + M.at(1, 1) * T.columns[i][1];
    }
    return out;
}

ChamberDecomposition chambers(const Rank2Toric& T) {
    T.validate();
    ChamberDecomposition out;

    for (std::size_t i = 0; i < T.size(); ++i) {
        auto dir = primitive(T.columns[i]);
        auto it = std::find_if(out.rays.begin(), out.rays.end(), [&](const Ray& r) {
            return r.x == dir.first && r.y == dir.second;
        });
        if (it == out.rays.end()) {
            out.rays.push_back(Ray{dir.first, dir.second, {i}, {}});
        } else {
            it->vars.push_back(i);
        }
    }
    std::stable_sort(out.rays.begin(), out.rays.end(), [](const Ray& a, const Ray& b) {
        return cross({a.x, a.y}, {b.x, b.y}) > 0;
    });
    // Salience: every pair strictly less than a half-turn apart.
    for (std::size_t i = 0; i < out.rays.size(); ++i)
        for (std::size_t j = i + 1; j < out.rays.size(); ++j) {
            std::int64_t c = cross({out.rays[i].x, out.rays[i].y}, {out.rays[j].x, out.rays[j].y});
            if (c < 0 || (c == 0 && !(out.rays[i].x == out.rays[j].x &&
                                      out.rays[i].y == out.rays[j].y)))
                throw PreconditionError("columns do not span a salient cone (not orderable "
                                        "anticlockwise)");
        }
    if (out.rays.size() < 2)
        throw PreconditionError("all columns lie on one ray: degenerate action matrix");

    for (auto& r : out.rays)
        for (std::size_t v : r.vars) {
            const auto& c = T.columns[v];
            Rat m = r.x != 0 ? c[0] / Rat(r.x) : c[1] / Rat(r.y);
            r.multiples.push_back(m);
        }

    // A boundary ray of the effective cone is movable exactly when it
    // carries at least two variables; otherwise the movable cone starts one
    // ray in.
    out.mov_lo = out.rays.front().vars.size() >= 2 ? 0 : 1;
    std::size_t last = out.rays.size() - 1;
    out.mov_hi = out.rays.back().vars.size() >= 2 ? last : last - 1;
    out.mov_empty = out.mov_lo >= out.mov_hi;
    return out;
}

namespace {

// Endpoint model: ray rho with exactly one ray tau beyond it, adapted basis
// rows R_tau (vanishing on tau, positive on rho) and R_rho (vanishing on
// rho, negative on tau), ordered with positive determinant.
AmpleModel endpoint_model(const Rank2Toric& T, const ChamberDecomposition& ch,
                          std::size_t rho_idx, std::size_t tau_idx) {
    const Ray& rho = ch.rays[rho_idx];
    const Ray& tau = ch.rays[tau_idx];
    if (tau.vars.size() != 1)
        throw InternalCheckError("divisorial endpoint with several contracted variables");
    std::size_t vtau = tau.vars[0];

    auto perp = [](std::int64_t x, std::int64_t y) {
        std::int64_t g = std::gcd(std::abs(x), std::abs(y));
        return std::pair<std::int64_t, std::int64_t>{y / g, -x / g};
    };
    auto r_tau = perp(tau.x, tau.y);
    if (dot(r_tau, {Rat(rho.x), Rat(rho.y)}).sign() < 0)
        r_tau = {-r_tau.first, -r_tau.second};
    auto r_rho = perp(rho.x, rho.y);
    if (dot(r_rho, {Rat(tau.x), Rat(tau.y)}).sign() > 0) r_rho = {-r_rho.first, -r_rho.second};

    bool tau_first = cross(r_tau, r_rho) < 0; // order rows so det > 0
    auto row0 = tau_first ? r_rho : r_tau;
    auto row1 = tau_first ? r_tau : r_rho;
    QMat M = QMat::from_rows({{Rat(row0.first), Rat(row0.second)},
                              {Rat(row1.first), Rat(row1.second)}});

    // Veronese index: the tau-variable's (negated) R_rho pairing.
    Rat idx = -dot(r_rho, T.columns[vtau]);
    if (idx.sign() <= 0) throw InternalCheckError("endpoint basis orientation failed");

    struct Gen {
        std::size_t var;
        Rat degree;
        Rat exponent; // power of the contracted variable
    };
    std::vector<Gen> gens;
    for (std::size_t v = 0; v < T.size(); ++v) {
        if (v == vtau) continue;
        gens.push_back({v, dot(r_tau, T.columns[v]), dot(r_rho, T.columns[v]) / idx});
    }
    std::sort(gens.begin(), gens.end(), [](const Gen& a, const Gen& b) {
        if (a.degree != b.degree) return a.degree < b.degree;
        return a.var < b.var;
    });

    AmpleModel out;
    out.kind = AmpleModel::Kind::WeightedProjective;
    out.basis_change = M;
    mpz_class idx_int = idx.numerator() / idx.denominator();
    out.veronese_index = idx_int.get_si();
    for (const auto& g : gens) {
        std::string m;
        if (!g.exponent.is_zero()) {
            m = T.names[vtau];
            if (!g.exponent.is_one())
                m += "^" + (g.exponent.is_integer() ? g.exponent.to_string()
                                                    : "(" + g.exponent.to_string() + ")");
            m += "*";
        }
        m += T.names[g.var];
        out.generators.push_back(m);
        if (!g.degree.is_integer() || g.degree.sign() <= 0)
            throw InternalCheckError("endpoint model degree is not a positive integer");
        out.degrees.push_back(g.degree.numerator().get_si());
    }
    out.target = wps_name(out.degrees);
    return out;
}

AmpleModel fibration_model(const Rank2Toric& T, const Ray& ray) {
    AmpleModel out;
    out.kind = AmpleModel::Kind::Fibration;
    for (std::size_t k = 0; k < ray.vars.size(); ++k) {
        out.generators.push_back(T.names[ray.vars[k]]);
        const Rat& m = ray.multiples[k];
        if (!m.is_integer() || m.sign() <= 0)
            throw InternalCheckError("fibration weight is not a positive integer");
        out.degrees.push_back(m.numerator().get_si());
    }
    out.target = wps_name(out.degrees);
    return out;
}

} // namespace

AmpleModel ample_model(const Rank2Toric& T, std::size_t ray_index, std::int64_t exponent_bound) {
    ChamberDecomposition ch = chambers(T);
    if (ray_index >= ch.rays.size()) throw PreconditionError("ray index out of range");
    const Ray& rho = ch.rays[ray_index];

    // Endpoint shapes get the adapted-basis presentation.
    if (ray_index == ch.mov_lo && ray_index == 1)
        return endpoint_model(T, ch, ray_index, 0);
    if (ray_index == ch.mov_hi && ray_index + 2 == ch.rays.size())
        return endpoint_model(T, ch, ray_index, ch.rays.size() - 1);
    if ((ray_index == 0 || ray_index + 1 == ch.rays.size()) && rho.vars.size() >= 2)
        return fibration_model(T, rho);

    // Generic ray: minimal generators of the semigroup of integral monomials
    // whose bidegree lies on the ray. Because the cone is salient, every
    // element splits into its pure on-ray-variable part and an element of
    // the off-ray sub-semigroup, so the generators are exactly the on-ray
    // variables plus the minimal off-ray elements. Only the off-ray lattice
    // is searched, on machine integers, up to the exponent bound.
    std::pair<std::int64_t, std::int64_t> dir{rho.x, rho.y};
    std::size_t n = T.size();

    mpz_class den(1);
    for (const auto& c : T.columns) {
        den = lcm(den, c[0].denominator());
        den = lcm(den, c[1].denominator());
    }
    std::vector<std::int64_t> col0(n), col1(n);
    for (std::size_t i = 0; i < n; ++i) {
        mpz_class a = T.columns[i][0].numerator() * (den / T.columns[i][0].denominator());
        mpz_class b = T.columns[i][1].numerator() * (den / T.columns[i][1].denominator());
        if (!a.fits_slong_p() || !b.fits_slong_p())
            throw ResourceLimitError("action entries exceed the machine-integer range");
        col0[i] = a.get_si();
        col1[i] = b.get_si();
    }
    std::vector<std::size_t> off_vars;
    for (std::size_t v = 0; v < n; ++v) {
        bool on = false;
        for (std::size_t rv : rho.vars) on = on || rv == v;
        if (!on) off_vars.push_back(v);
    }

    std::vector<std::vector<std::int32_t>> elems;
    std::vector<Rat> elem_degree;
    std::vector<std::int32_t> e(n, 0);
    std::function<void(std::size_t, std::int64_t, std::int64_t, std::int64_t)> rec =
        [&](std::size_t k, std::int64_t left, std::int64_t d0, std::int64_t d1) {
            if (k == off_vars.size()) {
                bool on_ray = (d0 * dir.second == d1 * dir.first) &&
                              (d0 * dir.first + d1 * dir.second) > 0;
                if (on_ray) {
                    elems.push_back(e);
                    Rat deg = dir.first != 0 ? Rat(d0) / (Rat(dir.first) * Rat(den))
                                             : Rat(d1) / (Rat(dir.second) * Rat(den));
                    elem_degree.push_back(deg);
                }
                return;
            }
            std::size_t v = off_vars[k];
            for (std::int64_t i = 0; i <= left; ++i) {
                e[v] = static_cast<std::int32_t>(i);
                rec(k + 1, left - i, d0 + i * col0[v], d1 + i * col1[v]);
            }
            e[v] = 0;
        };
    rec(0, exponent_bound, 0, 0);

    // Minimal elements of the off-ray sub-semigroup.
    std::set<std::vector<std::int32_t>> members(elems.begin(), elems.end());
    auto leq = [&](const std::vector<std::int32_t>& a, const std::vector<std::int32_t>& b) {
        for (std::size_t i = 0; i < n; ++i)
            if (a[i] > b[i]) return false;
        return true;
    };
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < elems.size(); ++i) {
        bool generator = true;
        for (std::size_t j = 0; j < elems.size() && generator; ++j) {
            if (j == i || !leq(elems[j], elems[i])) continue;
            std::vector<std::int32_t> diff(n);
            bool zero = true;
            for (std::size_t k = 0; k < n; ++k) {
                diff[k] = elems[i][k] - elems[j][k];
                zero = zero && diff[k] == 0;
            }
            if (zero) continue;
            if (members.count(diff)) generator = false;
        }
        if (generator) keep.push_back(i);
    }

    // Single on-ray variables join the generator list.
    for (std::size_t idx = 0; idx < rho.vars.size(); ++idx) {
        std::vector<std::int32_t> ev(n, 0);
        ev[rho.vars[idx]] = 1;
        elems.push_back(ev);
        elem_degree.push_back(rho.multiples[idx]);
        keep.push_back(elems.size() - 1);
    }
    if (keep.empty())
        throw ResourceLimitError("no sections found on the ray within the exponent bound");

    std::sort(keep.begin(), keep.end(), [&](std::size_t a, std::size_t b) {
        if (elem_degree[a] != elem_degree[b]) return elem_degree[a] < elem_degree[b];
        return elems[a] < elems[b];
    });

    AmpleModel out;
    bool wps_shape = true;
    for (std::size_t i : keep) {
        std::string m;
        for (std::size_t v = 0; v < n; ++v) {
            if (!elems[i][v]) continue;
            if (!m.empty()) m += "*";
            m += T.names[v];
            if (elems[i][v] != 1) m += "^" + std::to_string(elems[i][v]);
        }
        out.generators.push_back(m);
        const Rat& d = elem_degree[i];
        if (!d.is_integer() || d.sign() <= 0) wps_shape = false;
        out.degrees.push_back(d.is_integer() ? d.numerator().get_si() : 0);
    }
    // Report as a weighted projective space exactly when each generator is a
    // single variable times powers of one common auxiliary variable.
    std::optional<std::size_t> shared_aux;
    for (std::size_t i : keep) {
        int nontrivial = 0;
        std::optional<std::size_t> primary, aux;
        for (std::size_t v = 0; v < n; ++v) {
            if (!elems[i][v]) continue;
            ++nontrivial;
            if (elems[i][v] == 1 && !primary)
                primary = v;
            else
                aux = v;
        }
        if (nontrivial == 1) continue;
        if (nontrivial != 2 || !aux) {
            wps_shape = false;
            break;
        }
        if (shared_aux && *shared_aux != *aux) {
            wps_shape = false;
            break;
        }
        shared_aux = aux;
    }
    out.kind = wps_shape ? AmpleModel::Kind::WeightedProjective : AmpleModel::Kind::Proj;
    if (wps_shape) {
        out.target = wps_name(out.degrees);
    } else {
        std::string t = "Proj<";
        for (std::size_t i = 0; i < out.generators.size(); ++i) {
            if (i) t += ", ";
            t += out.generators[i];
        }
        out.target = t + ">";
    }
    return out;
}

std::vector<LinkStep> walk_link(const Rank2Toric& T, std::int64_t exponent_bound) {
    ChamberDecomposition ch = chambers(T);
    if (ch.mov_empty)
        throw PreconditionError("movable cone is empty: no 2-ray link to walk");
    std::vector<LinkStep> out;

    auto endpoint_step = [&](std::size_t ray_idx, bool left) {
        LinkStep st;
        st.ray_index = ray_idx;
        bool boundary = left ? ray_idx == 0 : ray_idx + 1 == ch.rays.size();
        if (boundary) {
            st.kind = LinkStep::Kind::Fibration;
            st.model = fibration_model(T, ch.rays[ray_idx]);
            st.label = "fibration onto " + st.model.target;
        } else {
            st.kind = LinkStep::Kind::DivisorialContraction;
            std::size_t tau = left ? 0 : ch.rays.size() - 1;
            st.model = endpoint_model(T, ch, ray_idx, tau);
            st.label = "divisorial contraction of V(" + T.names[ch.rays[tau].vars[0]] +
                       ") onto " + st.model.target;
        }
        return st;
    };

    out.push_back(endpoint_step(ch.mov_lo, true));
    for (std::size_t i = ch.mov_lo + 1; i < ch.mov_hi; ++i) {
        LinkStep st;
        st.kind = LinkStep::Kind::WallCrossing;
        st.ray_index = i;
        std::pair<std::int64_t, std::int64_t> m1{ch.rays[i].y, -ch.rays[i].x};
        Rat sum(0);
        for (std::size_t v = 0; v < T.size(); ++v) {
            Rat s = dot(m1, T.columns[v]);
            st.wall_signature.push_back(s);
            sum += s;
        }
        st.signature_sum = sum;
        st.label = sum.is_zero() ? "flop wall" : "flip wall";
        std::string sig = " (", pos, neg;
        for (std::size_t v = 0; v < T.size(); ++v) {
            if (v) sig += ",";
            sig += st.wall_signature[v].to_string();
            if (st.wall_signature[v].sign() > 0) pos += (pos.empty() ? "" : ",") + T.names[v];
            if (st.wall_signature[v].sign() < 0) neg += (neg.empty() ? "" : ",") + T.names[v];
        }
        st.label += sig + "); contracts V(" + neg + ") against V(" + pos + ")";
        out.push_back(st);
    }
    out.push_back(endpoint_step(ch.mov_hi, false));
    (void)exponent_bound;
    return out;
}

StrictTransform strict_transform(const Rank2Toric& T, const std::vector<Poly>& gens) {
    Weighting pw = T.pullback_weights();
    if (!T.exceptional) throw PreconditionError("no exceptional variable recorded");
    TablePtr cox = gens.empty() ? T.cox_table() : gens.front().table();
    std::size_t u = cox->index_of(T.names[*T.exceptional]);

    // Align the weighting with the generators' table (which may carry extra
    // parameter variables of pullback weight 0).
    Weighting w(cox->size(), 0);
    for (std::size_t i = 0; i < T.size(); ++i) {
        auto idx = cox->find(T.names[i]);
        if (idx) w[*idx] = pw[i];
    }

    StrictTransform out;
    for (const auto& g : gens) {
        auto [lifted, order] = pullback_chart(g.on_table(cox), w, u);
        out.gens.push_back(lifted);
        out.orders.push_back(order);
    }
    return out;
}

WallRestriction restrict_wall(const Rank2Toric& T, const std::vector<Poly>& gens,
                              std::size_t ray_index) {
    ChamberDecomposition ch = chambers(T);
    if (ray_index >= ch.rays.size()) throw PreconditionError("ray index out of range");
    const Ray& wallray = ch.rays[ray_index];

    WallRestriction out;
    for (std::size_t k = 0; k < wallray.vars.size(); ++k) {
        out.quotient_vars.push_back(T.names[wallray.vars[k]]);
        const Rat& m = wallray.multiples[k];
        out.quotient_weights.push_back(m.is_integer() ? m.numerator().get_si() : 0);
    }

    if (gens.empty()) {
        out.note = "zero ideal: the restriction is the whole wall quotient " +
                   wps_name(out.quotient_weights);
        return out;
    }
    TablePtr cox = gens.front().table();
    std::map<std::size_t, Poly> kill;
    for (std::size_t i = 0; i < T.size(); ++i) {
        bool on_wall = false;
        for (std::size_t v : wallray.vars) on_wall = on_wall || v == i;
        if (on_wall) continue;
        auto idx = cox->find(T.names[i]);
        if (idx) kill.emplace(*idx, Poly::zero(cox));
    }
    for (const auto& g : gens) {
        Poly r = g.substituted(kill);
        if (!r.is_zero()) out.equations.push_back(r);
    }
    if (out.equations.empty()) {
        out.note = "all equations restrict to zero on the wall";
        return out;
    }

    // Point counting on the small quotient shapes of the flop/flip bases.
    //
    // Single-variable quotient: the wall model is one point.
    if (out.quotient_vars.size() == 1) {
        std::size_t wv = cox->index_of(out.quotient_vars[0]);
        bool clean = true, nonzero = false;
        for (const auto& eq : out.equations) {
            for (std::size_t v = 0; v < cox->size(); ++v)
                if (eq.depends_on(v) && v != wv) clean = false;
            nonzero = nonzero || !eq.is_zero();
        }
        if (clean) out.point_count = nonzero ? 0 : 1;
        return out;
    }

    // P^1 quotient (two weight-1 variables): distinct common roots of the
    // restricted binary forms.
    if (out.quotient_vars.size() == 2 && out.quotient_weights == std::vector<std::int64_t>{1, 1}) {
        std::vector<std::size_t> uv = {cox->index_of(out.quotient_vars[0]),
                                       cox->index_of(out.quotient_vars[1])};
        bool clean = true;
        for (const auto& eq : out.equations)
            for (std::size_t v = 0; v < cox->size() && clean; ++v)
                if (eq.depends_on(v) && v != uv[0] && v != uv[1]) clean = false;
        if (clean && !out.equations.empty()) {
            TablePtr bt = sds::binary_table();
            std::map<std::size_t, Poly> ren{{uv[0], Poly::variable(bt, 0)},
                                            {uv[1], Poly::variable(bt, 1)}};
            Poly g = out.equations.front().substituted(ren);
            for (std::size_t i = 1; i < out.equations.size() && !g.is_constant(); ++i) {
                Poly next = out.equations[i].substituted(ren);
                g = binary_gcd(radical(g), radical(next));
            }
            out.point_count = g.is_constant() ? 0 : distinct_root_count(g);
        }
        return out;
    }

    // P(1,1,w) flop-base shapes: two equations, one weight-w variable W, the
    // rest weight 1.
    if (out.quotient_vars.size() == 3 && out.equations.size() == 2) {
        std::vector<std::size_t> unit_vars;
        std::optional<std::size_t> wvar;
        for (std::size_t k = 0; k < wallray.vars.size(); ++k) {
            if (out.quotient_weights[k] == 1)
                unit_vars.push_back(cox->index_of(out.quotient_vars[k]));
            else
                wvar = cox->index_of(out.quotient_vars[k]);
        }
        if (unit_vars.size() == 2 && wvar) {
            // Only proceed when the equations involve no extra parameters.
            bool clean = true;
            for (const auto& eq : out.equations)
                for (std::size_t v = 0; v < cox->size() && clean; ++v)
                    if (eq.depends_on(v) && v != *wvar && v != unit_vars[0] && v != unit_vars[1])
                        clean = false;
            if (clean) {
                auto wdeg = [&](const Poly& p) { return p.degree_in(*wvar); };
                const Poly* lin = nullptr;
                const Poly* quad = nullptr;
                for (const auto& eq : out.equations) {
                    if (wdeg(eq) <= 1 && !lin)
                        lin = &eq;
                    else if (wdeg(eq) == 2 && !quad)
                        quad = &eq;
                }
                if (lin && quad) {
                    Poly A = lin->coeff_of(*wvar, 1);
                    Poly B = lin->coeff_of(*wvar, 0);
                    Poly q2 = quad->coeff_of(*wvar, 2);
                    Poly q1 = quad->coeff_of(*wvar, 1);
                    Poly q0 = quad->coeff_of(*wvar, 0);
                    if (q2.is_constant() && !q2.is_zero() && q1.is_zero()) {
                        // Normalize to (A W + B, W^2 - d).
                        Poly d = (-q0).scaled(q2.constant_value().inverse());
                        TablePtr bt = sds::binary_table();
                        auto to_bin = [&](const Poly& p) {
                            std::map<std::size_t, Poly> ren{
                                {unit_vars[0], Poly::variable(bt, 0)},
                                {unit_vars[1], Poly::variable(bt, 1)}};
                            return p.substituted(ren);
                        };
                        std::optional<std::int64_t> count;
                        if (A.is_zero())
                            count = sds::count_cA5_flop_base(to_bin(B), to_bin(d));
                        else
                            count = sds::count_cA4_flop_base(to_bin(A).scaled(Rat(1, 2)),
                                                             to_bin(B), to_bin(d));
                        if (count) {
                            out.point_count = count;
                        } else {
                            out.degenerate = true;
                            out.note = "degenerate elimination on the wall quotient";
                        }
                    }
                }
            }
        }
    }
    return out;
}

LinkFile parse_link_file(const std::string& text) {
    LinkFile out;
    std::vector<std::string> params;
    std::vector<std::vector<Rat>> rows;
    std::vector<std::string> gen_lines;
    std::optional<std::string> exceptional;
    std::optional<std::vector<Rat>> pullback;

    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw PreconditionError("link file line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        if (key.back() == ':') key.pop_back();
        if (key == "vars") {
            std::string nm;
            while (ls >> nm) out.T.names.push_back(nm);
        } else if (key == "row1" || key == "row2") {
            std::vector<Rat> row;
            std::string entry;
            while (ls >> entry) row.push_back(Rat::from_string(entry));
            if (key == "row1")
                rows.insert(rows.begin(), row);
            else
                rows.push_back(row);
        } else if (key == "wall") {
            std::size_t w;
            if (!(ls >> w)) fail("bad wall index");
            out.T.wall = w;
        } else if (key == "exceptional") {
            std::string nm;
            if (!(ls >> nm)) fail("bad exceptional variable");
            exceptional = nm;
        } else if (key == "pullback") {
            std::vector<Rat> w;
            std::string entry;
            while (ls >> entry) w.push_back(Rat::from_string(entry));
            pullback = w;
        } else if (key == "params") {
            std::string nm;
            while (ls >> nm) params.push_back(nm);
        } else if (key == "gen") {
            std::string rest;
            std::getline(ls, rest);
            gen_lines.push_back(rest);
        } else {
            fail("unknown key '" + key + "'");
        }
    }
    if (rows.size() != 2) throw PreconditionError("link file needs row1 and row2");
    if (rows[0].size() != out.T.names.size() || rows[1].size() != out.T.names.size())
        throw PreconditionError("link file rows do not match the variable count");
    for (std::size_t i = 0; i < out.T.names.size(); ++i)
        out.T.columns.push_back({rows[0][i], rows[1][i]});
    if (exceptional) {
        auto it = std::find(out.T.names.begin(), out.T.names.end(), *exceptional);
        if (it == out.T.names.end()) throw PreconditionError("unknown exceptional variable");
        out.T.exceptional = static_cast<std::size_t>(it - out.T.names.begin());
    }
    if (pullback) {
        if (pullback->size() != out.T.names.size())
            throw PreconditionError("pullback weights do not match the variable count");
        Weighting w;
        for (const auto& r : *pullback) {
            if (!r.is_integer() || r.sign() < 0)
                throw PreconditionError("pullback weights must be non-negative integers");
            w.push_back(r.numerator().get_si());
        }
        out.T.pullback = w;
    }
    out.T.validate();

    if (!gen_lines.empty()) {
        std::vector<std::string> names = out.T.names;
        for (const auto& p : params) names.push_back(p);
        TablePtr table = VarTable::make(names);
        for (const auto& g : gen_lines) out.gens.push_back(parse_poly(g, table));
    }
    return out;
}

} // namespace canlink::toric
