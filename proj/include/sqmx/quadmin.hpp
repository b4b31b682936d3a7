#pragma once

#include <cstdint>

#include "sqmx/dense_matrix.hpp"
#include "sqmx/sampling.hpp"

namespace sqmx {

// The objective psi(v) = <v, Av> + n <v, diag(d) v> + n <b, v> together with
// the entry bound L = max(max|A_ij|, max|d_i|, max|b_i|).
struct QuadraticProblem {
    DenseMatrix a;
    Vector d;
    Vector b;
    std::size_t n;
    double entry_bound;  // L

    QuadraticProblem(DenseMatrix a_in, Vector d_in, Vector b_in);
};

enum class QuadStatus { Finite, Unbounded };

struct QuadSolution {
    Vector minimizer;
    double value = 0.0;  // -inf sentinel when Unbounded
    QuadStatus status = QuadStatus::Finite;
};

enum class TrsCase { Interior, Boundary, HardCase };

struct TrsSolution {
    Vector minimizer;
    double value = 0.0;
    double multiplier = 0.0;  // KKT multiplier, >= 0
    TrsCase case_tag = TrsCase::Interior;
};

double evaluate_psi(const QuadraticProblem& p, const Vector& v);

// H = (A + A^T)/2 + n diag(d), c = n b, so psi(v) = v^T H v + c^T v.
std::pair<DenseMatrix, Vector> hessian_and_linear(const QuadraticProblem& p);

// Exact unconstrained minimum via the pseudoinverse of H; detects unbounded
// directions (negative curvature, or a linear term along a null direction).
QuadSolution solve_unconstrained(const QuadraticProblem& p);

// Global minimum of psi over the Euclidean ball ||v|| <= r via the secular
// equation in the KKT multiplier, including the hard case.
TrsSolution solve_ball(const QuadraticProblem& p, double r);

struct SampledQuadResult {
    double normalized_value = 0.0;  // z~* / |S|^2
    IndexSample sample;
    QuadSolution solution;
};

struct SampledTrsResult {
    double normalized_value = 0.0;
    IndexSample sample;
    TrsSolution solution;
};

// Samples S at rate k/n, aborts when |S| > 2k, and solves the restricted
// problem exactly. Returns the normalized optimum z~*/|S|^2 to be compared
// against z*/n^2.
SampledQuadResult approximate_min(const QuadraticProblem& p, std::size_t k, std::uint64_t seed);

// Ball variant: the restricted problem is solved over radius sqrt(|S|/n) * r.
SampledTrsResult approximate_min_ball(const QuadraticProblem& p, double r, std::size_t k,
                                      std::uint64_t seed);

}  // namespace sqmx
