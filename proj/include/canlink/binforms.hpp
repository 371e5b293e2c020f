#ifndef CANLINK_BINFORMS_HPP
#define CANLINK_BINFORMS_HPP

#include <cstdint>

#include "canlink/poly.hpp"

namespace canlink {

// Utilities for homogeneous forms in two variables (binary forms) over Q,
// plus the classical Sylvester resultant in one chosen variable.
//
// Distinct-root counts are counts of points of P^1 over the algebraic
// closure; they are computed with gcd/derivative arithmetic over Q, which
// gives the same answer as over C.

// gcd of two binary forms, normalized so that the leading coefficient under
// the ordering y < z (z the later table variable) is 1. Inputs must be
// homogeneous in at most two shared variables; both zero is an error.
Poly binary_gcd(const Poly& a, const Poly& b);

// True when no square of a non-constant form divides p.
bool is_squarefree(const Poly& p);

// Product of the distinct prime factors of p, normalized like binary_gcd.
Poly radical(const Poly& p);

// Number of distinct roots of the form in P^1; error on the zero form.
std::int64_t distinct_root_count(const Poly& p);

// Number of distinct common roots of two forms in P^1 (0 when either is a
// nonzero constant); error when both are zero.
std::int64_t common_distinct_root_count(const Poly& a, const Poly& b);

// Classical Sylvester resultant of a and b with respect to var. The result
// does not involve var. Res = 0 if either input is zero; if both degrees in
// var are 0, the resultant is 1 by convention.
Poly resultant(const Poly& a, const Poly& b, std::size_t var);

} // namespace canlink

#endif
