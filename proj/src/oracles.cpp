#include "sqmx/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sqmx/errors.hpp"
#include "sqmx/linalg.hpp"
#include "sqmx/rng.hpp"

namespace sqmx {

namespace {

// Solves the t x t SPD system (G + ridge I) X = B for X, where B packs one
// right-hand side per column. Plain Cholesky; t is tiny for every oracle use.
void solve_spd_inplace(DenseMatrix& g, DenseMatrix& b) {
    const std::size_t t = g.rows();
    const double ridge = 1e-12 * std::max(1.0, max_norm(g));
    for (std::size_t i = 0; i < t; ++i) g(i, i) += ridge;
    // Cholesky factorization g = L L^T (lower triangle in place).
    for (std::size_t i = 0; i < t; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double acc = g(i, j);
            for (std::size_t k = 0; k < j; ++k) acc -= g(i, k) * g(j, k);
            if (i == j) {
                if (acc <= 0.0) throw NoConvergenceError("oracle: Cholesky breakdown");
                g(i, i) = std::sqrt(acc);
            } else {
                g(i, j) = acc / g(j, j);
            }
        }
    }
    // Forward and back substitution per column of b.
    for (std::size_t col = 0; col < b.cols(); ++col) {
        for (std::size_t i = 0; i < t; ++i) {
            double acc = b(i, col);
            for (std::size_t k = 0; k < i; ++k) acc -= g(i, k) * b(k, col);
            b(i, col) = acc / g(i, i);
        }
        for (std::size_t ii = t; ii-- > 0;) {
            double acc = b(ii, col);
            for (std::size_t k = ii + 1; k < t; ++k) acc -= g(k, ii) * b(k, col);
            b(ii, col) = acc / g(ii, ii);
        }
    }
}

double quadratic_value(const DenseMatrix& h, const Vector& c, const Vector& v) {
    const Vector hv = h.multiply(v);
    return dot(v, hv) + dot(c, v);
}

double residual_sq(const DenseMatrix& a, const DenseMatrix& u, const DenseMatrix& v) {
    const std::size_t n = a.rows();
    const std::size_t m = a.cols();
    const std::size_t t = u.cols();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            double fit = 0.0;
            for (std::size_t l = 0; l < t; ++l) fit += u(i, l) * v(j, l);
            const double diff = a(i, j) - fit;
            acc += diff * diff;
        }
    }
    return acc;
}

}  // namespace

OracleReport OracleReport::make(std::string name, double reference, double candidate) {
    OracleReport r;
    r.name = std::move(name);
    r.reference_value = reference;
    r.candidate_value = candidate;
    r.abs_error = std::abs(reference - candidate);
    r.rel_error = r.abs_error / std::max(1.0, std::abs(reference));
    return r;
}

Vector oracle_spectrum(const DenseMatrix& a) {
    if (std::min(a.rows(), a.cols()) > 64) {
        throw TooLargeError("oracle_spectrum: min dimension exceeds 64");
    }
    const bool use_cols = a.cols() <= a.rows();
    const std::size_t s = use_cols ? a.cols() : a.rows();
    DenseMatrix gram(s, s);
    for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t j = i; j < s; ++j) {
            double acc = 0.0;
            if (use_cols) {
                for (std::size_t k = 0; k < a.rows(); ++k) acc += a(k, i) * a(k, j);
            } else {
                for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * a(j, k);
            }
            gram(i, j) = acc;
            gram(j, i) = acc;
        }
    }
    Vector eigenvalues = symmetric_eigen(gram).eigenvalues;
    Vector sigma(s);
    for (std::size_t i = 0; i < s; ++i) {
        sigma[i] = std::sqrt(std::max(eigenvalues[s - 1 - i], 0.0));
    }
    return sigma;
}

TrsOracleResult oracle_trs(const DenseMatrix& h, const Vector& c, double r, std::size_t grid) {
    if (h.rows() > 32) throw TooLargeError("oracle_trs: dimension exceeds 32");
    if (grid < 10000) throw InvalidArgumentError("oracle_trs: grid must be at least 10^4");
    if (!(r > 0.0)) throw InvalidArgumentError("oracle_trs: radius must be positive");

    const std::size_t n = h.rows();
    const EigenResult eig = symmetric_eigen(h);
    const Vector& lam = eig.eigenvalues;
    const Vector c_hat = eig.eigenvectors.multiply_transpose(c);
    const double lam_min = lam.front();
    const double eig_tol = 1e-9 * std::max(1.0, max_norm(h));
    const double c_tol = 1e-9 * std::max(1.0, norm2(c));

    TrsOracleResult best;
    best.value = std::numeric_limits<double>::infinity();
    auto consider = [&](const Vector& v) {
        const double val = quadratic_value(h, c, v);
        if (val < best.value) {
            best.value = val;
            best.minimizer = v;
        }
    };
    auto point_at = [&](double lambda) {
        Vector coeffs(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double denom = lam[i] + lambda;
            if (std::abs(denom) > eig_tol) coeffs[i] = -0.5 * c_hat[i] / denom;
        }
        Vector v(n, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (coeffs[j] == 0.0) continue;
            for (std::size_t i = 0; i < n; ++i) v[i] += eig.eigenvectors(i, j) * coeffs[j];
        }
        return v;
    };

    // Interior candidate.
    if (lam_min >= -eig_tol) {
        bool compatible = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(lam[i]) <= eig_tol && std::abs(c_hat[i]) > c_tol) compatible = false;
        }
        if (compatible) {
            Vector v0 = point_at(0.0);
            if (norm2(v0) <= r) consider(v0);
        }
    }

    const double lam_bar = std::max(0.0, -lam_min);

    // Bottom-eigenvector completion at the hard-case multiplier.
    {
        Vector v_perp = point_at(lam_bar);
        const double np = norm2(v_perp);
        if (np < r) {
            const double alpha = std::sqrt(r * r - np * np);
            Vector plus = v_perp;
            Vector minus = v_perp;
            for (std::size_t i = 0; i < n; ++i) {
                plus[i] += alpha * eig.eigenvectors(i, 0);
                minus[i] -= alpha * eig.eigenvectors(i, 0);
            }
            consider(plus);
            consider(minus);
        } else if (np > 0.0) {
            Vector scaled = v_perp;
            for (double& x : scaled) x *= r / np;
            consider(scaled);
        }
    }

    // Dense lambda sweep with zoom-in refinement around the incumbent.
    double lo = lam_bar;
    double hi = norm2(c) / (2.0 * r) - lam_min + 1.0;
    for (int round = 0; round < 6; ++round) {
        double best_lambda = lo;
        double best_round_value = std::numeric_limits<double>::infinity();
        const double step = (hi - lo) / static_cast<double>(grid);
        for (std::size_t g = 0; g <= grid; ++g) {
            const double lambda = lo + step * static_cast<double>(g);
            Vector v = point_at(lambda);
            const double nv = norm2(v);
            if (nv > r && nv > 0.0) {
                for (double& x : v) x *= r / nv;
            }
            const double val = quadratic_value(h, c, v);
            if (val < best_round_value) {
                best_round_value = val;
                best_lambda = lambda;
            }
            consider(v);
        }
        const double width = 2.0 * step;
        lo = std::max(lam_bar, best_lambda - width);
        hi = best_lambda + width;
        if (hi - lo < 1e-15 * std::max(1.0, lam_bar)) break;
    }
    return best;
}

double oracle_rank_residual(const DenseMatrix& b, std::size_t t, std::size_t restarts) {
    if (std::max(b.rows(), b.cols()) > 32) throw TooLargeError("oracle_rank_residual: dims exceed 32");
    const std::size_t n = b.rows();
    const std::size_t m = b.cols();
    if (t > std::min(n, m)) throw RankError("oracle_rank_residual: t exceeds min dims");
    const double fro = frobenius_norm(b);
    if (t == 0) return fro * fro;

    constexpr std::size_t kMaxSweeps = 500;
    double best = fro * fro;
    for (std::size_t restart = 0; restart < restarts; ++restart) {
        SplitMix64 rng(0x0a15ULL + restart);
        DenseMatrix u(n, t);
        for (double& x : u.data()) x = rng.next_normal();
        DenseMatrix v(m, t);
        double prev = std::numeric_limits<double>::infinity();
        for (std::size_t sweep = 0; sweep < kMaxSweeps; ++sweep) {
            // V <- argmin ||B - U V^T||_F : solve (U^T U) V^T = U^T B.
            {
                DenseMatrix gram(t, t);
                for (std::size_t i = 0; i < t; ++i)
                    for (std::size_t j = 0; j < t; ++j) {
                        double acc = 0.0;
                        for (std::size_t k = 0; k < n; ++k) acc += u(k, i) * u(k, j);
                        gram(i, j) = acc;
                    }
                DenseMatrix rhs(t, m);
                for (std::size_t i = 0; i < t; ++i)
                    for (std::size_t j = 0; j < m; ++j) {
                        double acc = 0.0;
                        for (std::size_t k = 0; k < n; ++k) acc += u(k, i) * b(k, j);
                        rhs(i, j) = acc;
                    }
                solve_spd_inplace(gram, rhs);
                for (std::size_t j = 0; j < m; ++j)
                    for (std::size_t i = 0; i < t; ++i) v(j, i) = rhs(i, j);
            }
            // U <- argmin ||B - U V^T||_F : solve (V^T V) U^T = V^T B^T.
            {
                DenseMatrix gram(t, t);
                for (std::size_t i = 0; i < t; ++i)
                    for (std::size_t j = 0; j < t; ++j) {
                        double acc = 0.0;
                        for (std::size_t k = 0; k < m; ++k) acc += v(k, i) * v(k, j);
                        gram(i, j) = acc;
                    }
                DenseMatrix rhs(t, n);
                for (std::size_t i = 0; i < t; ++i)
                    for (std::size_t j = 0; j < n; ++j) {
                        double acc = 0.0;
                        for (std::size_t k = 0; k < m; ++k) acc += v(k, i) * b(j, k);
                        rhs(i, j) = acc;
                    }
                solve_spd_inplace(gram, rhs);
                for (std::size_t j = 0; j < n; ++j)
                    for (std::size_t i = 0; i < t; ++i) u(j, i) = rhs(i, j);
            }
            const double res = residual_sq(b, u, v);
            if (prev - res <= 1e-14 * std::max(1.0, res)) {
                prev = res;
                break;
            }
            prev = res;
        }
        best = std::min(best, prev);
    }
    return std::max(best, 0.0);
}

double oracle_quadmin(const QuadraticProblem& p, std::size_t steps, double step_size) {
    if (p.n > 64) throw TooLargeError("oracle_quadmin: dimension exceeds 64");
    auto [h, c] = hessian_and_linear(p);

    // lambda_max and lambda_min estimated with matrix powers only, keeping
    // this path independent of the Jacobi eigensolver.
    const double lam_max = power_iteration_sigma1(h, 300, 0x9a11ULL);
    DenseMatrix shifted(p.n, p.n);
    for (std::size_t i = 0; i < p.n; ++i)
        for (std::size_t j = 0; j < p.n; ++j)
            shifted(i, j) = (i == j ? lam_max : 0.0) - h(i, j);
    const double lam_min_est = lam_max - power_iteration_sigma1(shifted, 300, 0x9a12ULL);
    if (lam_min_est < 1e-6) {
        throw NotStronglyConvexError("oracle_quadmin: estimated lambda_min below 1e-6");
    }

    const double eta = step_size > 0.0 ? step_size : 1.0 / (2.0 * lam_max);
    Vector v(p.n, 0.0);
    for (std::size_t it = 0; it < steps; ++it) {
        const Vector hv = h.multiply(v);
        for (std::size_t i = 0; i < p.n; ++i) v[i] -= eta * (2.0 * hv[i] + c[i]);
    }
    return evaluate_psi(p, v);
}

}  // namespace sqmx
