#pragma once

#include <cstdint>
#include <vector>

#include "sqmx/dense_matrix.hpp"

namespace sqmx {

// RBF Gram matrix K_ij = exp(-||x_i - x_j||^2 / (2 sigma^2)) with exact unit
// diagonal.
DenseMatrix rbf_gram(const std::vector<Vector>& points, double sigma);

// n points in R^d with i.i.d. standard normal coordinates from the pinned RNG.
std::vector<Vector> synthesize_gaussian(std::size_t n, std::size_t d, std::uint64_t seed);

}  // namespace sqmx
