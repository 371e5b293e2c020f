#ifndef CANLINK_SPLITTING_HPP
#define CANLINK_SPLITTING_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "canlink/poly.hpp"

namespace canlink {

// Truncated solution of f = (x + g)^2 + h = (v (x + p))^2 + h, x the split
// variable, h and p free of x, v with constant term 1. All four series are
// truncated at total degree N (split variable counting 1, the remaining
// variables by the chosen grading).
struct SplitSeries {
    Poly g, h, p, v;
    std::int64_t trunc = 0;
    Weighting grading; // degree used for the truncation, split variable included
};

struct SplitRequest {
    Poly f;
    std::size_t split_var = 0;
    std::int64_t trunc_degree = 0;
    // Degree of each non-split variable for the residual grading; defaults
    // to the table weights. Entries may be 0 for symbolic scalar parameters.
    Weighting grading;
    std::size_t term_limit = 0; // 0 = unguarded
};

// Degree-by-degree evaluation of the splitting recurrences with memoized
// (i, d) slices, i the split-variable exponent and d the residual degree:
//
//   g_{1,0} = 0
//   g_{i,d} = (f_{i+1,d} - sum_{k=0}^{d} sum_{j=max(0,2-k)}^{min(i+1,i+d-k-1)}
//                              g_{j,k} g_{i+1-j,d-k}) / 2
//   h_d     = f_{0,d} - sum_{j=2}^{d-2} g_{0,j} g_{0,d-j}
//   p_d     = g_{0,d} - sum_{j=2}^{d-1} v_{0,d-j} p_j
//   v_{0,0} = 1
//   v_{i,d} = g_{i+1,d} - sum_{j=2}^{d} v_{i+1,d-j} p_j
//
// The caller must pre-normalize the quadratic part to split_var^2 + (terms
// free of split_var); slices (0,0), (1,0), (0,1), (1,1) must vanish and
// (2,0) must be 1.
class SplitEngine {
  public:
    SplitEngine(Poly f, std::size_t split_var, Weighting grading);

    const Poly& f_slice(std::int32_t i, std::int64_t d);
    const Poly& g(std::int32_t i, std::int64_t d);
    const Poly& h(std::int64_t d);
    const Poly& p(std::int64_t d);
    const Poly& v(std::int32_t i, std::int64_t d);

    // Sums up to residual degree N (for g, v: split-exponent + residual <= N).
    Poly g_trunc(std::int64_t N);
    Poly h_trunc(std::int64_t N);
    Poly p_trunc(std::int64_t N);
    Poly v_trunc(std::int64_t N);

    std::size_t split_var() const { return var_; }
    const Weighting& grading() const { return grading_; }
    const TablePtr& table() const { return f_.table(); }

    // Term-count ceiling across memo tables; 0 disables the guard.
    void set_term_limit(std::size_t limit) { term_limit_ = limit; }

  private:
    void check_preconditions() const;
    void guard(const Poly& q) const;

    Poly f_;
    std::size_t var_;
    Weighting grading_;
    std::size_t term_limit_ = 0;
    std::map<std::pair<std::int32_t, std::int64_t>, Poly> fmemo_, gmemo_, vmemo_;
    std::map<std::int64_t, Poly> hmemo_, pmemo_;
};

SplitSeries split(const SplitRequest& req);

// Both identities f = (x+g)^2 + h and f = (v(x+p))^2 + h modulo degree N+1.
bool verify_split(const Poly& f, std::size_t split_var, const SplitSeries& s);

// Split in each listed variable in turn; returns the final residual series
// truncated at N. Each residual must satisfy the next stage's precondition.
Poly iterated_split(const Poly& f, const std::vector<std::size_t>& split_vars, std::int64_t N);

// h_2 .. h_up_to expressed in the symbolic coefficients f_{i,d} (ring
// variables named f_i_d); index 0 of the result is h_2.
std::vector<Poly> h_symbolic(std::int64_t up_to);
// The table the symbolic series live on (variables f_i_d for i + d <= bound).
TablePtr h_symbolic_table(std::int64_t up_to);

} // namespace canlink

#endif
