#ifndef CANLINK_TORIC_HPP
#define CANLINK_TORIC_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "canlink/matrix.hpp"
#include "canlink/poly.hpp"

namespace canlink::toric {

// Rank-2 toric variety datum: a 2 x n rational action matrix (columns are
// the variables' bidegrees) plus the irrelevant-ideal wall splitting the
// variables into two blocks. The wall index is explicit input, never
// inferred.
struct Rank2Toric {
    std::vector<std::string> names;
    std::vector<std::array<Rat, 2>> columns;
    std::size_t wall = 0; // blocks [0, wall) and [wall, n)

    // Pullback convention for strict transforms: the exceptional variable
    // and the u-power each variable acquires. Derived from the action row
    // with exceptional entry -1 when not set explicitly.
    std::optional<std::size_t> exceptional;
    std::optional<Weighting> pullback;

    std::size_t size() const { return names.size(); }
    TablePtr cox_table() const;
    void validate() const;
    Weighting pullback_weights() const;
};

// action <- M * action; negative determinant flips the ray orientation.
Rank2Toric normalize(const Rank2Toric& T, const QMat& M);

// Primitive integer ray direction with the variables sitting on it
// (original column order preserved).
struct Ray {
    std::int64_t x = 0, y = 0;
    std::vector<std::size_t> vars;
    // Multiple of the primitive direction per variable, aligned with vars.
    std::vector<Rat> multiples;
};

struct ChamberDecomposition {
    std::vector<Ray> rays;     // distinct directions, anticlockwise
    std::size_t mov_lo = 0;    // movable-cone endpoints as ray indices
    std::size_t mov_hi = 0;
    bool mov_empty = false;
    std::size_t chamber_count() const { return rays.size() < 2 ? 0 : rays.size() - 1; }
};

ChamberDecomposition chambers(const Rank2Toric& T);

// Ample model of the (fractional multiple of the) divisor class on a ray.
struct AmpleModel {
    enum class Kind { WeightedProjective, Proj, Fibration } kind = Kind::Proj;
    std::vector<std::string> generators;   // rendered monomials, display order
    std::vector<std::int64_t> degrees;     // degree per generator
    std::string target;                    // "P(1,1,1,1,3,5)" or "Proj<...>"
    std::optional<QMat> basis_change;      // recorded for endpoint models
    std::int64_t veronese_index = 1;       // denominator of fractional powers
};

// Interior-ray model via bounded integral monomial search (semigroup
// generators up to the exponent bound); endpoint models via the adapted
// basis presentation.
AmpleModel ample_model(const Rank2Toric& T, std::size_t ray_index,
                       std::int64_t exponent_bound = 24);

struct LinkStep {
    enum class Kind { DivisorialContraction, WallCrossing, Fibration } kind;
    std::size_t ray_index = 0;
    std::vector<Rat> wall_signature; // signed weight per variable (wall basis)
    Rat signature_sum;               // 0 = flop wall
    std::string label;
    AmpleModel model;                // endpoint steps only
};

std::vector<LinkStep> walk_link(const Rank2Toric& T, std::int64_t exponent_bound = 24);

// Strict transform of pre-blowup generators: each pulled back through the
// recorded convention and divided by the maximal exceptional power.
struct StrictTransform {
    std::vector<Poly> gens;             // on the Cox table
    std::vector<std::int64_t> orders;   // division order per generator
};
StrictTransform strict_transform(const Rank2Toric& T, const std::vector<Poly>& gens);

// Restriction of equations to a wall: every off-wall variable is set to
// zero; the induced equations live on the wall's quotient weighted
// projective space. For the P(1,1,w)-with-two-equations shapes of the
// flop-base computations, the number of distinct points is reported.
struct WallRestriction {
    std::vector<Poly> equations;          // non-zero restrictions, Cox table
    std::vector<std::string> quotient_vars;
    std::vector<std::int64_t> quotient_weights;
    std::optional<std::int64_t> point_count;
    bool degenerate = false;
    std::string note;
};
WallRestriction restrict_wall(const Rank2Toric& T, const std::vector<Poly>& gens,
                              std::size_t ray_index);

// Link-definition file: "vars:", "row1:", "row2:", "wall:", optional
// "exceptional:", "pullback:", "params:" and repeated "gen:" lines.
struct LinkFile {
    Rank2Toric T;
    std::vector<Poly> gens; // over cox_table extended by params
};
LinkFile parse_link_file(const std::string& text);

} // namespace canlink::toric

#endif
