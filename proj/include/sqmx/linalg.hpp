#pragma once

#include <cstdint>

#include "sqmx/dense_matrix.hpp"

namespace sqmx {

double frobenius_norm(const DenseMatrix& a);
double max_norm(const DenseMatrix& a);

struct EigenResult {
    // Sorted nondecreasing.
    Vector eigenvalues;
    // Orthonormal eigenvectors as columns; column i pairs with eigenvalues[i].
    DenseMatrix eigenvectors;
};

// Cyclic Jacobi eigendecomposition for symmetric matrices. Converges when the
// off-diagonal Frobenius mass drops below 1e-12 * ||H||_F, capped at 30 sweeps.
EigenResult symmetric_eigen(const DenseMatrix& h);

struct SvdResult {
    // Sorted nonincreasing, all >= 0, length min(rows, cols).
    Vector singular_values;
    // n x r and m x r with orthonormal columns, r = min(rows, cols).
    DenseMatrix left_vectors;
    DenseMatrix right_vectors;
};

// One-sided (Hestenes) Jacobi SVD. Deliberately a different route from
// symmetric_eigen so the Gram-matrix oracle stays an independent check.
SvdResult svd(const DenseMatrix& a);

// Largest singular value estimate: iterate v <- normalize(A^T (A v)) from a
// seeded random start for a fixed number of iterations, then return ||A v||.
double power_iteration_sigma1(const DenseMatrix& a, std::size_t iterations, std::uint64_t seed);

// Top-t singular values by power iteration with explicit rank-one deflation.
Vector top_singular_values(const DenseMatrix& a, std::size_t t, std::size_t iterations,
                           std::uint64_t seed);

}  // namespace sqmx
