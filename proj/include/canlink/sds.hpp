#ifndef CANLINK_SDS_HPP
#define CANLINK_SDS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "canlink/poly.hpp"
#include "canlink/splitting.hpp"

namespace canlink::sds {

// ---- rings ---------------------------------------------------------------

// Geometry variables x, y, z, t, w of P(1,1,1,1,3) plus every symbolic
// coefficient: xi_2, a_0..a_3, b_0..b_4, c_0..c_5, d_0..d_6 and the derived
// q, r, s, e, r_2, s_3, e_2, q_1, r_1, s_2, e_3, q_2, s_1, e_4, q_3, e_5,
// A_0, B_1, B_0.
TablePtr ring();
// Declared weighted degree per variable: geometry x,y,z,t = 1, w = 3,
// coefficient symbols their subscript (0 allowed), q,r,s,e = 1,1,2,3.
const Weighting& grading();
// Just x, y, z, t, w.
TablePtr geometry_table();
// Just y, z (coefficient forms live here).
TablePtr binary_table();

// The generic sextic with symbolic coefficient variables.
Poly generic_f();
// The same with every coefficient slot expanded into generic binary forms;
// slot s of degree j >= 1 becomes sum_i s_i * y^(j-i) * z^i with fresh
// variables s_0..s_j (degree-0 slots keep their own name).
Poly generic_f_expanded();
TablePtr expanded_table();

// ---- families and condition chains ----------------------------------------

struct FamilyId {
    int n = 1;     // 1..8 (9..12 handled by extended_steps)
    int sub = 0;   // 1..4 when n == 7, else 0
    std::string str() const { return sub ? std::to_string(n) + "." + std::to_string(sub)
                                         : std::to_string(n); }
};
FamilyId parse_family(const std::string& text);
std::vector<FamilyId> all_families(); // n = 1..8 with the four 7.x

struct SubstitutionStep {
    std::string label;                       // "2", "7", "7.1", ...
    std::map<std::string, std::string> images;
};

// Conditions 2..n for the family (empty for n = 1).
std::vector<SubstitutionStep> condition_steps(const FamilyId& id);
// Conditions 9..upto of the non-isolated families, 9 <= upto <= 12.
std::vector<SubstitutionStep> extended_steps(int upto);

Poly apply_steps(const Poly& f, const std::vector<SubstitutionStep>& steps);

// ---- the splitting pipeline (affine chart x = 1, split variable t) --------

// Default ceiling on the memoized series' term counts.
inline constexpr std::size_t kDefaultTermLimit = 2'000'000;

// f with w^2 added (cancelling -w^2) and x set to 1.
Poly chart(const Poly& f);

// h_k of the split of chart(f) with respect to t under the declared grading.
Poly split_h(const Poly& f, std::int64_t k, std::size_t term_limit = kDefaultTermLimit);

// h_k for the family's symbolic state. Guarded: k <= n + 2 unless overridden.
Poly residual_h(const FamilyId& id, std::int64_t k, bool override_guard = false,
                std::size_t term_limit = kDefaultTermLimit);

// ---- parameter counting ----------------------------------------------------

// Number of free rational coefficients after the substitutions of
// condition_steps (subfamily normalizations included).
int param_dim(const FamilyId& id);
// Expected moduli dimension: param_dim - 10 (automorphism group dimension).
int expected_moduli_dim(const FamilyId& id);

// ---- concrete coefficient data ---------------------------------------------

// Coefficient slot values as binary forms over binary_table(); absent keys
// are zero for concrete work. Keys: the 23 slot names, optionally derived
// names (r_2, s_3, ..., A_0, B_1).
struct SDSCoefficients {
    std::map<std::string, Poly> values;
    Poly get(const std::string& name) const;
    bool has(const std::string& name) const { return values.count(name) != 0; }
};

// "name = polynomial in y, z" lines; '#' comments; blank lines ignored.
SDSCoefficients parse_family_file(const std::string& text);

// The concrete sextic on geometry_table(); validates homogeneity per slot.
Poly concrete_f(const SDSCoefficients& coeffs);

// ---- membership -------------------------------------------------------------

struct ConditionCheck {
    std::string id;      // "2".."8", "guard", "residual"
    bool pass = false;
    std::string witness; // difference polynomial or explanation
};

struct ConditionReport {
    std::vector<ConditionCheck> checks;
    bool member = false;
    Poly residual;        // h_{n+1} of the concrete split
    std::string verdict;
    // Derived data recovered during the check (7.x and 8 families).
    std::map<std::string, Poly> derived;
};

ConditionReport check_membership(const SDSCoefficients& coeffs, const FamilyId& id);

// ---- point evaluations (Jacobian probes) ------------------------------------

struct JacobianEval {
    Poly value, dx, dy, dz, dt;
};
// point = values for (x, y, z, t, w); entries may be symbolic polynomials.
JacobianEval point_jacobian(const Poly& f, const std::vector<Poly>& point);

// ---- extended conditions 9..12 ----------------------------------------------

struct ExtendedConditions {
    std::vector<SubstitutionStep> steps;
    bool identities_hold = false;  // the two factorizations after condition 9
    Poly factor1_lhs, factor1_rhs; // x^3 a_3 + x^2 b_4 + x c_5 + d_6 vs square
    Poly factor2_lhs, factor2_rhs;
    std::vector<Poly> singular_curve; // (w, t, s_3 + 2 a_1 r_2 + x r_2)
};
ExtendedConditions extended_conditions(int upto);

// ---- generality (wall/point-count) conditions --------------------------------

struct GeneralityReport {
    bool pass = false;
    std::string detail;
    std::optional<std::int64_t> count; // for the point-count families
};
GeneralityReport check_generality(const FamilyId& id, const SDSCoefficients& coeffs);

// Distinct-point counters on P(1, 1, 3), shared with the toric wall module.
// V(2 w a2 + c5, w^2 - d6): nullopt = degenerate (positive-dimensional).
std::optional<std::int64_t> count_cA4_flop_base(const Poly& a2, const Poly& c5, const Poly& d6);
// V(a2, -w^2 + d6).
std::optional<std::int64_t> count_cA5_flop_base(const Poly& a2, const Poly& d6);

} // namespace canlink::sds

#endif
