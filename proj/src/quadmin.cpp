#include "sqmx/quadmin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sqmx/errors.hpp"
#include "sqmx/linalg.hpp"

namespace sqmx {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double vector_max_abs(const Vector& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// ||v(lambda)|| for v(lambda) = -1/2 Q (Lambda + lambda I)^-1 c_hat, with the
// listed components of c_hat treated as zero.
double secular_norm(const Vector& eigenvalues, const Vector& c_hat,
                    const std::vector<bool>& dropped, double lambda) {
    double acc = 0.0;
    for (std::size_t i = 0; i < c_hat.size(); ++i) {
        if (dropped[i]) continue;
        const double denom = eigenvalues[i] + lambda;
        const double term = c_hat[i] / denom;
        acc += term * term;
    }
    return 0.5 * std::sqrt(acc);
}

Vector assemble_from_eigenbasis(const DenseMatrix& q, const Vector& coeffs) {
    const std::size_t n = q.rows();
    Vector v(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const double cj = coeffs[j];
        if (cj == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) v[i] += q(i, j) * cj;
    }
    return v;
}

}  // namespace

QuadraticProblem::QuadraticProblem(DenseMatrix a_in, Vector d_in, Vector b_in)
    : a(std::move(a_in)), d(std::move(d_in)), b(std::move(b_in)), n(a.rows()), entry_bound(0.0) {
    if (a.cols() != n) {
        throw DimensionError("QuadraticProblem: A must be square, got " + std::to_string(a.rows()) +
                             "x" + std::to_string(a.cols()));
    }
    if (d.size() != n || b.size() != n) {
        throw DimensionError("QuadraticProblem: d and b must have length n = " + std::to_string(n));
    }
    entry_bound = std::max({max_norm(a), vector_max_abs(d), vector_max_abs(b)});
}

double evaluate_psi(const QuadraticProblem& p, const Vector& v) {
    if (v.size() != p.n) {
        throw DimensionError("evaluate_psi: v has length " + std::to_string(v.size()) +
                             ", expected " + std::to_string(p.n));
    }
    const Vector av = p.a.multiply(v);
    double quad = dot(v, av);
    double diag = 0.0;
    double lin = 0.0;
    for (std::size_t i = 0; i < p.n; ++i) {
        diag += p.d[i] * v[i] * v[i];
        lin += p.b[i] * v[i];
    }
    const double nn = static_cast<double>(p.n);
    return quad + nn * diag + nn * lin;
}

std::pair<DenseMatrix, Vector> hessian_and_linear(const QuadraticProblem& p) {
    const std::size_t n = p.n;
    const double nn = static_cast<double>(n);
    DenseMatrix h(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) h(i, j) = 0.5 * (p.a(i, j) + p.a(j, i));
        h(i, i) += nn * p.d[i];
    }
    Vector c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = nn * p.b[i];
    return {std::move(h), std::move(c)};
}

QuadSolution solve_unconstrained(const QuadraticProblem& p) {
    auto [h, c] = hessian_and_linear(p);
    const EigenResult eig = symmetric_eigen(h);
    const double eig_tol = 1e-9 * std::max(1.0, max_norm(h));
    const Vector c_hat = eig.eigenvectors.multiply_transpose(c);
    const double c_tol = 1e-9 * std::max(1.0, norm2(c));

    QuadSolution sol;
    if (eig.eigenvalues.front() < -eig_tol) {
        sol.status = QuadStatus::Unbounded;
        sol.value = -kInf;
        return sol;
    }
    Vector coeffs(p.n, 0.0);
    for (std::size_t i = 0; i < p.n; ++i) {
        if (std::abs(eig.eigenvalues[i]) <= eig_tol) {
            if (std::abs(c_hat[i]) > c_tol) {
                // Linear term along a flat direction: psi decreases without bound.
                sol.status = QuadStatus::Unbounded;
                sol.value = -kInf;
                return sol;
            }
        } else {
            coeffs[i] = -0.5 * c_hat[i] / eig.eigenvalues[i];
        }
    }
    sol.minimizer = assemble_from_eigenbasis(eig.eigenvectors, coeffs);
    sol.value = evaluate_psi(p, sol.minimizer);
    sol.status = QuadStatus::Finite;
    return sol;
}

TrsSolution solve_ball(const QuadraticProblem& p, double r) {
    if (!(r > 0.0)) throw InvalidArgumentError("solve_ball: radius must be positive");
    auto [h, c] = hessian_and_linear(p);
    const std::size_t n = p.n;
    const EigenResult eig = symmetric_eigen(h);
    const Vector& lam = eig.eigenvalues;
    const Vector c_hat = eig.eigenvectors.multiply_transpose(c);

    const double eig_tol = 1e-9 * std::max(1.0, max_norm(h));
    const double c_tol = 1e-9 * std::max(1.0, norm2(c));
    const double lam_min = lam.front();

    TrsSolution sol;

    // Interior candidate: pseudoinverse solution when H is PSD and the linear
    // term is compatible with the null space.
    if (lam_min >= -eig_tol) {
        bool compatible = true;
        Vector coeffs(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(lam[i]) <= eig_tol) {
                if (std::abs(c_hat[i]) > c_tol) {
                    compatible = false;
                    break;
                }
            } else {
                coeffs[i] = -0.5 * c_hat[i] / lam[i];
            }
        }
        if (compatible) {
            Vector v0 = assemble_from_eigenbasis(eig.eigenvectors, coeffs);
            if (norm2(v0) <= r) {
                sol.minimizer = std::move(v0);
                sol.value = evaluate_psi(p, sol.minimizer);
                sol.multiplier = 0.0;
                sol.case_tag = TrsCase::Interior;
                return sol;
            }
        }
    }

    // Boundary: find lambda >= lambda_bar = max(0, -lam_min) with ||v(lambda)|| = r.
    const double lam_bar = std::max(0.0, -lam_min);
    std::vector<bool> bottom(n, false);
    double bottom_mass = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (lam[i] + lam_bar <= eig_tol) {
            bottom[i] = true;
            bottom_mass += c_hat[i] * c_hat[i];
        }
    }
    const bool c_clears_bottom = std::sqrt(bottom_mass) <= c_tol;

    std::vector<bool> dropped(n, false);
    if (c_clears_bottom) {
        // The bottom components of c are numerical noise; exclude them from
        // the secular function so it stays finite at lambda_bar.
        dropped = bottom;
    }

    const double norm_at_bar =
        c_clears_bottom ? secular_norm(lam, c_hat, dropped, lam_bar) : kInf;

    if (c_clears_bottom && norm_at_bar < r && lam_bar > eig_tol) {
        // Hard case: complete the perpendicular part with the bottom
        // eigenvector to reach the sphere.
        Vector coeffs(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            if (!dropped[i]) coeffs[i] = -0.5 * c_hat[i] / (lam[i] + lam_bar);
        }
        Vector v_perp = assemble_from_eigenbasis(eig.eigenvectors, coeffs);
        const double alpha = std::sqrt(std::max(r * r - dot(v_perp, v_perp), 0.0));
        // Deterministic orientation: first nonzero component of q_min positive.
        double flip = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double qi = eig.eigenvectors(i, 0);
            if (qi != 0.0) {
                flip = (qi > 0.0) ? 1.0 : -1.0;
                break;
            }
        }
        for (std::size_t i = 0; i < n; ++i) v_perp[i] += alpha * flip * eig.eigenvectors(i, 0);
        sol.minimizer = std::move(v_perp);
        sol.value = evaluate_psi(p, sol.minimizer);
        sol.multiplier = lam_bar;
        sol.case_tag = TrsCase::HardCase;
        return sol;
    }

    // Safeguarded Newton on 1/||v(lambda)|| - 1/r over (lam_bar, lam_hi].
    double lo = lam_bar;
    double hi = norm2(c) / (2.0 * r) - lam_min + 1.0;
    double lambda = 0.5 * (lo + hi);
    if (secular_norm(lam, c_hat, dropped, hi) > r) {
        throw NoConvergenceError("solve_ball: secular bracket failed to enclose the root");
    }
    const double tol_r = 1e-10 * r;
    bool found = false;
    for (int it = 0; it < 200 && !found; ++it) {
        if (!(lambda > lo) || !(lambda < hi)) lambda = 0.5 * (lo + hi);
        double phi_sq = 0.0;
        double dphi_sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (dropped[i]) continue;
            const double denom = lam[i] + lambda;
            const double term = c_hat[i] / denom;
            phi_sq += term * term;
            dphi_sq += term * term / denom;
        }
        const double phi = 0.5 * std::sqrt(phi_sq);
        if (std::abs(phi - r) <= tol_r) {
            found = true;
            break;
        }
        if (phi > r) {
            lo = lambda;
        } else {
            hi = lambda;
        }
        if (phi > 0.0 && phi_sq > 0.0) {
            // Newton step on h(lambda) = 1/phi - 1/r (nearly linear in lambda);
            // phi^2 = phi_sq / 4, so d(phi)/d(lambda) = -dphi_sq / (4 phi).
            const double dphi = -0.25 * dphi_sq / phi;
            const double h_val = 1.0 / phi - 1.0 / r;
            const double h_der = -dphi / (phi * phi);
            if (h_der != 0.0) {
                const double next = lambda - h_val / h_der;
                lambda = (next > lo && next < hi) ? next : 0.5 * (lo + hi);
                continue;
            }
        }
        lambda = 0.5 * (lo + hi);
    }
    if (!found) {
        // Fall back to the midpoint; the bracket is by now extremely tight.
        lambda = 0.5 * (lo + hi);
    }

    Vector coeffs(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (dropped[i]) continue;
        coeffs[i] = -0.5 * c_hat[i] / (lam[i] + lambda);
    }
    sol.minimizer = assemble_from_eigenbasis(eig.eigenvectors, coeffs);
    sol.value = evaluate_psi(p, sol.minimizer);
    sol.multiplier = lambda;
    sol.case_tag = TrsCase::Boundary;
    return sol;
}

SampledQuadResult approximate_min(const QuadraticProblem& p, std::size_t k, std::uint64_t seed) {
    IndexSample s = sample_indices(p.n, k, seed);
    if (!oversize_guard(s, k)) {
        throw AbortedError("approximate_min: |S| = " + std::to_string(s.size()) + " > 2k = " +
                           std::to_string(2 * k));
    }
    if (s.indices.empty()) throw AbortedError("approximate_min: empty sample");
    QuadraticProblem sub(restrict_matrix(p.a, s, s), restrict_vector(p.d, s),
                         restrict_vector(p.b, s));
    SampledQuadResult out;
    out.solution = solve_unconstrained(sub);
    const double size = static_cast<double>(s.size());
    out.normalized_value = out.solution.value / (size * size);
    out.sample = std::move(s);
    return out;
}

SampledTrsResult approximate_min_ball(const QuadraticProblem& p, double r, std::size_t k,
                                      std::uint64_t seed) {
    if (!(r > 0.0)) throw InvalidArgumentError("approximate_min_ball: radius must be positive");
    IndexSample s = sample_indices(p.n, k, seed);
    if (!oversize_guard(s, k)) {
        throw AbortedError("approximate_min_ball: |S| = " + std::to_string(s.size()) +
                           " > 2k = " + std::to_string(2 * k));
    }
    if (s.indices.empty()) throw AbortedError("approximate_min_ball: empty sample");
    QuadraticProblem sub(restrict_matrix(p.a, s, s), restrict_vector(p.d, s),
                         restrict_vector(p.b, s));
    const double size = static_cast<double>(s.size());
    const double sub_radius = std::sqrt(size / static_cast<double>(p.n)) * r;
    SampledTrsResult out;
    out.solution = solve_ball(sub, sub_radius);
    out.normalized_value = out.solution.value / (size * size);
    out.sample = std::move(s);
    return out;
}

}  // namespace sqmx
