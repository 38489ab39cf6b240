// Small dense exact linear algebra over the rationals.

#pragma once

#include <optional>
#include <vector>

#include "goh_atlas/rational.hpp"

namespace goh_atlas {

using RationalMatrix = std::vector<std::vector<Rational>>;  // row-major

/// Rank by fraction-free (Bareiss) elimination after clearing denominators.
int exact_rank(const RationalMatrix& rows);

/// Inverse of a square matrix, or nullopt when singular.
std::optional<RationalMatrix> exact_inverse(RationalMatrix a);

std::vector<Rational> mat_vec(const RationalMatrix& a, const std::vector<Rational>& x);

}  // namespace goh_atlas
