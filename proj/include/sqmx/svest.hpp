#pragma once

#include <cstdint>

#include "sqmx/dense_matrix.hpp"
#include "sqmx/sampling.hpp"

namespace sqmx {

// Output of the sampled singular-value estimators. lambda_t and
// lambda_t_minus_1 are the scaled rank residuals whose gap the estimate is
// the square root of.
struct SvEstimate {
    std::size_t t = 1;
    double estimate = 0.0;
    IndexSample row_sample;
    IndexSample col_sample;
    double lambda_t = 0.0;
    double lambda_t_minus_1 = 0.0;
};

// Eckart-Young residual: ||B||_F^2 minus the top-t squared singular values,
// clamped to >= 0. Equals the best rank-t Frobenius fit error squared.
double rank_residual(const DenseMatrix& b, std::size_t t);

// Row/column sampling mode for square inputs. Independent mode draws S_R and
// S_C separately (seeds seed and seed+1); Symmetric reuses S_R as S_C, which
// keeps the restriction of a Gram matrix symmetric.
enum class SampleMode { Independent, Symmetric };

// Scaled largest singular value of a sampled submatrix; sigma_1 of the
// restriction comes from 20 power iterations.
SvEstimate estimate_sigma1(const DenseMatrix& a, std::size_t k, std::uint64_t seed,
                           SampleMode mode = SampleMode::Independent);

// t-th largest singular value via the gap of scaled rank residuals of the
// sampled submatrix (exact small SVD).
SvEstimate estimate_sigma_t(const DenseMatrix& a, std::size_t t, std::size_t k,
                            std::uint64_t seed, SampleMode mode = SampleMode::Independent);

}  // namespace sqmx
