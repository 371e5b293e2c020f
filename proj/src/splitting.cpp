#include "canlink/splitting.hpp"

#include <algorithm>

#include "canlink/errors.hpp"

namespace canlink {

SplitEngine::SplitEngine(Poly f, std::size_t split_var, Weighting grading)
    : f_(std::move(f)), var_(split_var), grading_(std::move(grading)) {
    if (grading_.empty()) grading_ = f_.table()->weights();
    if (grading_.size() != f_.table()->size())
        throw PreconditionError("grading length mismatch");
    for (auto w : grading_)
        if (w < 0) throw PreconditionError("negative grading weight");
    check_preconditions();
}

void SplitEngine::check_preconditions() const {
    Weighting w = grading_;
    w[var_] = 0;
    Poly x = Poly::variable(f_.table(), var_);
    auto offending = [&](std::int32_t i, std::int64_t d) {
        Poly s = f_.coeff_slice(var_, i, d, w);
        if (s.is_zero()) return std::string();
        return " " + (x.pow(i) * s).render() + ";";
    };
    std::string bad;
    if (auto s = offending(0, 0); !s.empty()) bad += " constant term" + s;
    if (auto s = offending(1, 0); !s.empty()) bad += " linear term in the split variable:" + s;
    if (auto s = offending(0, 1); !s.empty()) bad += " linear residual term:" + s;
    if (auto s = offending(1, 1); !s.empty()) bad += " cross term of degree 2:" + s;
    Poly sq = f_.coeff_slice(var_, 2, 0, w);
    if (!(sq.is_constant() && sq.constant_value() == Rat(1)))
        bad += " coefficient of " + f_.table()->name(var_) + "^2 is " + sq.render() + ";";
    if (!bad.empty())
        throw PreconditionError("splitting precondition violated:" + bad +
                                " the quadratic part must be " + f_.table()->name(var_) +
                                "^2 + (terms free of " + f_.table()->name(var_) + ")");
}

void SplitEngine::guard(const Poly& q) const {
    if (term_limit_ && q.term_count() > term_limit_)
        throw ResourceLimitError("splitting term ceiling exceeded (" +
                                 std::to_string(q.term_count()) + " > " +
                                 std::to_string(term_limit_) + " terms)");
}

const Poly& SplitEngine::f_slice(std::int32_t i, std::int64_t d) {
    auto key = std::make_pair(i, d);
    auto it = fmemo_.find(key);
    if (it != fmemo_.end()) return it->second;
    Weighting w = grading_;
    w[var_] = 0;
    Poly s = (i < 0 || d < 0) ? Poly::zero(f_.table()) : f_.coeff_slice(var_, i, d, w);
    return fmemo_.emplace(key, std::move(s)).first->second;
}

const Poly& SplitEngine::g(std::int32_t i, std::int64_t d) {
    auto key = std::make_pair(i, d);
    auto it = gmemo_.find(key);
    if (it != gmemo_.end()) return it->second;
    Poly val = Poly::zero(f_.table());
    if (i >= 0 && d >= 0 && !(i == 1 && d == 0)) {
        Poly sum = Poly::zero(f_.table());
        for (std::int64_t k = 0; k <= d; ++k) {
            std::int32_t jlo = static_cast<std::int32_t>(std::max<std::int64_t>(0, 2 - k));
            std::int64_t jhi = std::min<std::int64_t>(i + 1, i + d - k - 1);
            for (std::int64_t j = jlo; j <= jhi; ++j)
                sum = sum + g(static_cast<std::int32_t>(j), k) *
                                g(static_cast<std::int32_t>(i + 1 - j), d - k);
        }
        val = (f_slice(i + 1, d) - sum).scaled(Rat(1, 2));
    }
    guard(val);
    return gmemo_.emplace(key, std::move(val)).first->second;
}

const Poly& SplitEngine::h(std::int64_t d) {
    auto it = hmemo_.find(d);
    if (it != hmemo_.end()) return it->second;
    Poly sum = Poly::zero(f_.table());
    for (std::int64_t j = 2; j <= d - 2; ++j) sum = sum + g(0, j) * g(0, d - j);
    Poly val = f_slice(0, d) - sum;
    guard(val);
    return hmemo_.emplace(d, std::move(val)).first->second;
}

const Poly& SplitEngine::p(std::int64_t d) {
    auto it = pmemo_.find(d);
    if (it != pmemo_.end()) return it->second;
    Poly sum = Poly::zero(f_.table());
    for (std::int64_t j = 2; j <= d - 1; ++j) sum = sum + v(0, d - j) * p(j);
    Poly val = g(0, d) - sum;
    guard(val);
    return pmemo_.emplace(d, std::move(val)).first->second;
}

const Poly& SplitEngine::v(std::int32_t i, std::int64_t d) {
    auto key = std::make_pair(i, d);
    auto it = vmemo_.find(key);
    if (it != vmemo_.end()) return it->second;
    Poly val(f_.table());
    if (i == 0 && d == 0) {
        val = Poly::constant(f_.table(), Rat(1));
    } else if (i >= 0 && d >= 0) {
        Poly sum = Poly::zero(f_.table());
        for (std::int64_t j = 2; j <= d; ++j) sum = sum + v(i + 1, d - j) * p(j);
        val = g(i + 1, d) - sum;
    }
    guard(val);
    return vmemo_.emplace(key, std::move(val)).first->second;
}

Poly SplitEngine::h_trunc(std::int64_t N) {
    Poly out = Poly::zero(f_.table());
    for (std::int64_t d = 0; d <= N; ++d) out = out + h(d);
    return out;
}

Poly SplitEngine::p_trunc(std::int64_t N) {
    Poly out = Poly::zero(f_.table());
    for (std::int64_t d = 0; d <= N; ++d) out = out + p(d);
    return out;
}

Poly SplitEngine::g_trunc(std::int64_t N) {
    Poly out = Poly::zero(f_.table());
    std::int64_t wx = std::max<std::int64_t>(grading_[var_], 1);
    for (std::int32_t i = 0; wx * i <= N; ++i) {
        Poly xi = Poly::variable(f_.table(), var_, i);
        for (std::int64_t d = 0; wx * i + d <= N; ++d) out = out + xi * g(i, d);
    }
    return out;
}

Poly SplitEngine::v_trunc(std::int64_t N) {
    Poly out = Poly::zero(f_.table());
    std::int64_t wx = std::max<std::int64_t>(grading_[var_], 1);
    for (std::int32_t i = 0; wx * i <= N; ++i) {
        Poly xi = Poly::variable(f_.table(), var_, i);
        for (std::int64_t d = 0; wx * i + d <= N; ++d) out = out + xi * v(i, d);
    }
    return out;
}

SplitSeries split(const SplitRequest& req) {
    SplitEngine eng(req.f, req.split_var, req.grading);
    eng.set_term_limit(req.term_limit);
    std::int64_t N = req.trunc_degree;
    if (N < 2) throw PreconditionError("truncation degree must be at least 2");
    SplitSeries s;
    s.trunc = N;
    s.grading = eng.grading();
    s.g = eng.g_trunc(N);
    s.h = eng.h_trunc(N);
    s.p = eng.p_trunc(N);
    s.v = eng.v_trunc(N);

    // Postconditions from the construction.
    if (s.h.depends_on(req.split_var) || s.p.depends_on(req.split_var))
        throw InternalCheckError("residual series depend on the split variable");
    auto mult_ok = [&](const Poly& q) {
        auto w = q.weight(s.grading);
        return !w || *w >= 2;
    };
    if (!mult_ok(s.g) || !mult_ok(s.p) || !mult_ok(s.h))
        throw InternalCheckError("splitting output multiplicity below 2");
    if (!verify_split(req.f, req.split_var, s))
        throw InternalCheckError("splitting identity failed at truncation " + std::to_string(N));
    return s;
}

bool verify_split(const Poly& f, std::size_t split_var, const SplitSeries& s) {
    f.check_same_table(s.h);
    std::int64_t N = s.trunc;
    Weighting w = s.grading.empty() ? f.table()->weights() : s.grading;
    Poly x = Poly::variable(f.table(), split_var);
    Poly lhs = f.weighted_truncated(w, N);
    Poly xg = x + s.g;
    Poly sq = (xg.mul_trunc_weighted(xg, w, N) + s.h).weighted_truncated(w, N);
    if (sq != lhs) return false;
    Poly vxp = s.v.mul_trunc_weighted(x + s.p, w, N);
    Poly sq2 = (vxp.mul_trunc_weighted(vxp, w, N) + s.h).weighted_truncated(w, N);
    return sq2 == lhs;
}

Poly iterated_split(const Poly& f, const std::vector<std::size_t>& split_vars, std::int64_t N) {
    Poly cur = f;
    for (std::size_t stage = 0; stage < split_vars.size(); ++stage) {
        try {
            SplitEngine eng(cur, split_vars[stage], {});
            cur = eng.h_trunc(N);
        } catch (const PreconditionError& e) {
            throw PreconditionError("iterated split stage " + std::to_string(stage + 1) + " (" +
                                    f.table()->name(split_vars[stage]) + "): " + e.what());
        }
    }
    return cur;
}

TablePtr h_symbolic_table(std::int64_t up_to) {
    std::vector<std::string> names;
    for (std::int64_t i = 0; i <= up_to; ++i)
        for (std::int64_t d = 0; i + d <= up_to; ++d)
            names.push_back("f_" + std::to_string(i) + "_" + std::to_string(d));
    return VarTable::make(std::move(names));
}

std::vector<Poly> h_symbolic(std::int64_t up_to) {
    if (up_to < 2) throw PreconditionError("h_symbolic needs degree >= 2");
    TablePtr table = h_symbolic_table(up_to);
    // Same recurrences, but the slices f_{i,d} are opaque ring variables
    // (with the precondition seeds baked in) instead of slices of a concrete
    // polynomial.
    struct SymEngine {
        TablePtr table;
        std::int64_t bound;
        std::map<std::pair<std::int32_t, std::int64_t>, Poly> gmemo;
        std::map<std::int64_t, Poly> hmemo;

        Poly fs(std::int32_t i, std::int64_t d) {
            if (i < 0 || d < 0) return Poly::zero(table);
            if ((i == 0 && d == 0) || (i == 1 && d == 0) || (i == 0 && d == 1) ||
                (i == 1 && d == 1))
                return Poly::zero(table);
            if (i == 2 && d == 0) return Poly::constant(table, Rat(1));
            auto idx = table->find("f_" + std::to_string(i) + "_" + std::to_string(d));
            if (!idx) return Poly::zero(table);
            return Poly::variable(table, *idx);
        }
        const Poly& g(std::int32_t i, std::int64_t d) {
            auto key = std::make_pair(i, d);
            auto it = gmemo.find(key);
            if (it != gmemo.end()) return it->second;
            Poly val = Poly::zero(table);
            if (!(i == 1 && d == 0)) {
                Poly sum = Poly::zero(table);
                for (std::int64_t k = 0; k <= d; ++k) {
                    std::int64_t jlo = std::max<std::int64_t>(0, 2 - k);
                    std::int64_t jhi = std::min<std::int64_t>(i + 1, i + d - k - 1);
                    for (std::int64_t j = jlo; j <= jhi; ++j)
                        sum = sum + g(static_cast<std::int32_t>(j), k) *
                                        g(static_cast<std::int32_t>(i + 1 - j), d - k);
                }
                val = (fs(i + 1, d) - sum).scaled(Rat(1, 2));
            }
            return gmemo.emplace(key, std::move(val)).first->second;
        }
        Poly h(std::int64_t d) {
            Poly sum = Poly::zero(table);
            for (std::int64_t j = 2; j <= d - 2; ++j) sum = sum + g(0, j) * g(0, d - j);
            return fs(0, d) - sum;
        }
    } eng{table, up_to, {}, {}};

    std::vector<Poly> out;
    for (std::int64_t d = 2; d <= up_to; ++d) out.push_back(eng.h(d));
    return out;
}

} // namespace canlink
