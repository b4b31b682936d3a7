#pragma once

#include <cstdint>
#include <string>

#include "sqmx/dense_matrix.hpp"
#include "sqmx/quadmin.hpp"

namespace sqmx {

// Brute-force references used by tests and the acceptance suite. Each oracle
// deliberately avoids the solver internals of the operation it validates.
struct OracleReport {
    std::string name;
    double reference_value = 0.0;
    double candidate_value = 0.0;
    double abs_error = 0.0;
    double rel_error = 0.0;

    static OracleReport make(std::string name, double reference, double candidate);
};

// Singular values through the Gram matrix of the smaller side, via the
// symmetric Jacobi eigensolver; independent of the one-sided Jacobi SVD.
Vector oracle_spectrum(const DenseMatrix& a);

struct TrsOracleResult {
    double value = 0.0;
    Vector minimizer;
};

// Exhaustive trust-region reference: interior candidate, a dense lambda grid
// over the secular parametrization (with zoom-in refinement rounds), and
// bottom-eigenvector completion for the hard case. Every candidate is
// feasible, so the returned value upper-bounds the true minimum.
TrsOracleResult oracle_trs(const DenseMatrix& h, const Vector& c, double r, std::size_t grid);

// Best rank-t Frobenius residual by alternating least squares over explicit
// factors, restarted from several seeded initializations.
double oracle_rank_residual(const DenseMatrix& b, std::size_t t, std::size_t restarts);

// Long-horizon gradient descent on a strictly convex instance. step_size <= 0
// selects the default 1/(2 lambda_max) with lambda_max estimated by matrix
// powers only (no eigendecomposition shared with solve_unconstrained).
double oracle_quadmin(const QuadraticProblem& p, std::size_t steps, double step_size);

}  // namespace sqmx
