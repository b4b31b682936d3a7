#include "sqmx/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sqmx/errors.hpp"
#include "sqmx/rng.hpp"

namespace sqmx {

namespace {

constexpr std::size_t kMaxJacobiSweeps = 30;

double off_diagonal_mass(const DenseMatrix& m) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (i != j) acc += m(i, j) * m(i, j);
    return std::sqrt(acc);
}

Vector random_unit_vector(std::size_t dim, SplitMix64& rng) {
    Vector v(dim);
    double nrm = 0.0;
    // Retry in the measure-zero event the normal draw is numerically zero.
    do {
        for (double& x : v) x = rng.next_normal();
        nrm = norm2(v);
    } while (nrm == 0.0);
    for (double& x : v) x /= nrm;
    return v;
}

// Replaces near-zero columns of u (flagged by `degenerate`) with unit vectors
// orthonormal to all other columns, via twice-applied Gram-Schmidt.
void complete_orthonormal_columns(DenseMatrix& u, const std::vector<bool>& degenerate) {
    const std::size_t n = u.rows();
    const std::size_t r = u.cols();
    for (std::size_t j = 0; j < r; ++j) {
        if (!degenerate[j]) continue;
        bool placed = false;
        for (std::size_t trial = 0; trial < n && !placed; ++trial) {
            Vector cand(n, 0.0);
            cand[trial] = 1.0;
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t c = 0; c < r; ++c) {
                    if (c == j) continue;
                    double proj = 0.0;
                    for (std::size_t i = 0; i < n; ++i) proj += cand[i] * u(i, c);
                    for (std::size_t i = 0; i < n; ++i) cand[i] -= proj * u(i, c);
                }
            }
            const double nrm = norm2(cand);
            if (nrm > 1e-6) {
                for (std::size_t i = 0; i < n; ++i) u(i, j) = cand[i] / nrm;
                placed = true;
            }
        }
        if (!placed) throw NoConvergenceError("svd: failed to complete orthonormal basis");
    }
}

}  // namespace

double frobenius_norm(const DenseMatrix& a) {
    double acc = 0.0;
    for (double x : a.data()) acc += x * x;
    return std::sqrt(acc);
}

double max_norm(const DenseMatrix& a) {
    double m = 0.0;
    for (double x : a.data()) m = std::max(m, std::abs(x));
    return m;
}

EigenResult symmetric_eigen(const DenseMatrix& h) {
    const std::size_t n = h.rows();
    if (h.cols() != n) {
        throw DimensionError("symmetric_eigen: matrix is " + std::to_string(n) + "x" +
                             std::to_string(h.cols()));
    }
    const double scale = std::max(1.0, max_norm(h));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(h(i, j) - h(j, i)) > 1e-10 * scale)
                throw NotSymmetricError("symmetric_eigen: |H - H^T| exceeds tolerance at (" +
                                        std::to_string(i) + "," + std::to_string(j) + ")");

    DenseMatrix m = h;
    // Symmetrize exactly so rotations preserve symmetry bit-for-bit.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double avg = 0.5 * (m(i, j) + m(j, i));
            m(i, j) = avg;
            m(j, i) = avg;
        }
    DenseMatrix q = DenseMatrix::identity(n);
    const double target = 1e-12 * frobenius_norm(h);

    bool converged = (n == 1) || off_diagonal_mass(m) <= target;
    for (std::size_t sweep = 0; sweep < kMaxJacobiSweeps && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t jq = p + 1; jq < n; ++jq) {
                const double apq = m(p, jq);
                if (apq == 0.0) continue;
                const double app = m(p, p);
                const double aqq = m(jq, jq);
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                m(p, p) = app - t * apq;
                m(jq, jq) = aqq + t * apq;
                m(p, jq) = 0.0;
                m(jq, p) = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    if (r != p && r != jq) {
                        const double arp = m(r, p);
                        const double arq = m(r, jq);
                        m(r, p) = arp - s * (arq + tau * arp);
                        m(p, r) = m(r, p);
                        m(r, jq) = arq + s * (arp - tau * arq);
                        m(jq, r) = m(r, jq);
                    }
                    const double qrp = q(r, p);
                    const double qrq = q(r, jq);
                    q(r, p) = qrp - s * (qrq + tau * qrp);
                    q(r, jq) = qrq + s * (qrp - tau * qrq);
                }
            }
        }
        converged = off_diagonal_mass(m) <= target;
    }
    if (!converged) throw NoConvergenceError("symmetric_eigen: Jacobi sweep budget exhausted");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&m](std::size_t a, std::size_t b) { return m(a, a) < m(b, b); });

    EigenResult out{Vector(n), DenseMatrix(n, n)};
    for (std::size_t j = 0; j < n; ++j) {
        out.eigenvalues[j] = m(order[j], order[j]);
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, j) = q(i, order[j]);
    }
    return out;
}

SvdResult svd(const DenseMatrix& a) {
    if (a.rows() < a.cols()) {
        SvdResult t = svd(a.transposed());
        return SvdResult{std::move(t.singular_values), std::move(t.right_vectors),
                         std::move(t.left_vectors)};
    }
    const std::size_t n = a.rows();
    const std::size_t m = a.cols();

    // Work on columns of A; rotations orthogonalize column pairs.
    DenseMatrix w = a;
    DenseMatrix v = DenseMatrix::identity(m);

    const double tol = 4e-13;
    // Columns whose mass has collapsed to rounding noise are excluded from
    // further rotations; their left vectors are rebuilt by completion below.
    const double fro0 = frobenius_norm(a);
    const double floor_sq = (1e-15 * fro0) * (1e-15 * fro0);
    bool converged = (m == 1);
    for (std::size_t sweep = 0; sweep < 2 * kMaxJacobiSweeps && !converged; ++sweep) {
        converged = true;
        for (std::size_t p = 0; p + 1 < m; ++p) {
            for (std::size_t jq = p + 1; jq < m; ++jq) {
                double alpha = 0.0;
                double beta = 0.0;
                double gamma = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double wip = w(i, p);
                    const double wiq = w(i, jq);
                    alpha += wip * wip;
                    beta += wiq * wiq;
                    gamma += wip * wiq;
                }
                if (alpha <= floor_sq || beta <= floor_sq) continue;
                if (std::abs(gamma) <= tol * std::sqrt(alpha * beta) || gamma == 0.0) continue;
                converged = false;

                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(zeta * zeta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    const double wip = w(i, p);
                    const double wiq = w(i, jq);
                    w(i, p) = c * wip - s * wiq;
                    w(i, jq) = s * wip + c * wiq;
                }
                for (std::size_t i = 0; i < m; ++i) {
                    const double vip = v(i, p);
                    const double viq = v(i, jq);
                    v(i, p) = c * vip - s * viq;
                    v(i, jq) = s * vip + c * viq;
                }
            }
        }
    }
    if (!converged) throw NoConvergenceError("svd: one-sided Jacobi sweep budget exhausted");

    Vector sigma(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += w(i, j) * w(i, j);
        sigma[j] = std::sqrt(acc);
    }
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&sigma](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

    SvdResult out{Vector(m), DenseMatrix(n, m), DenseMatrix(m, m)};
    const double sigma_max = sigma[order[0]];
    const double rank_cut = sigma_max * 1e-13;
    std::vector<bool> degenerate(m, false);
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t src = order[j];
        out.singular_values[j] = sigma[src];
        for (std::size_t i = 0; i < m; ++i) out.right_vectors(i, j) = v(i, src);
        if (sigma[src] > rank_cut && sigma[src] > 0.0) {
            for (std::size_t i = 0; i < n; ++i) out.left_vectors(i, j) = w(i, src) / sigma[src];
        } else {
            degenerate[j] = true;
        }
    }
    complete_orthonormal_columns(out.left_vectors, degenerate);
    return out;
}

double power_iteration_sigma1(const DenseMatrix& a, std::size_t iterations, std::uint64_t seed) {
    if (iterations < 1) throw InvalidArgumentError("power_iteration_sigma1: iterations must be >= 1");
    SplitMix64 rng(seed);
    Vector v = random_unit_vector(a.cols(), rng);
    for (std::size_t it = 0; it < iterations; ++it) {
        Vector w = a.multiply(v);
        Vector z = a.multiply_transpose(w);
        const double nz = norm2(z);
        if (nz == 0.0) return 0.0;
        for (std::size_t j = 0; j < z.size(); ++j) v[j] = z[j] / nz;
    }
    return norm2(a.multiply(v));
}

Vector top_singular_values(const DenseMatrix& a, std::size_t t, std::size_t iterations,
                           std::uint64_t seed) {
    const std::size_t r = std::min(a.rows(), a.cols());
    if (t < 1 || t > r) {
        throw RankError("top_singular_values: t = " + std::to_string(t) +
                        " outside [1, " + std::to_string(r) + "]");
    }
    if (iterations < 1) throw InvalidArgumentError("top_singular_values: iterations must be >= 1");

    DenseMatrix b = a;
    SplitMix64 rng(seed);
    Vector estimates;
    estimates.reserve(t);
    for (std::size_t j = 0; j < t; ++j) {
        Vector v = random_unit_vector(b.cols(), rng);
        double sigma = 0.0;
        for (std::size_t it = 0; it < iterations; ++it) {
            Vector w = b.multiply(v);
            Vector z = b.multiply_transpose(w);
            const double nz = norm2(z);
            if (nz == 0.0) break;
            for (std::size_t i = 0; i < z.size(); ++i) v[i] = z[i] / nz;
        }
        Vector w = b.multiply(v);
        sigma = norm2(w);
        estimates.push_back(sigma);
        if (sigma > 0.0) {
            // Deflate: B -= sigma * u v^T with u = Bv / sigma.
            for (std::size_t i = 0; i < b.rows(); ++i) {
                double* row = b.row_ptr(i);
                const double ui = w[i] / sigma;
                for (std::size_t c = 0; c < b.cols(); ++c) row[c] -= sigma * ui * v[c];
            }
        }
    }
    std::sort(estimates.begin(), estimates.end(), std::greater<double>());
    return estimates;
}

}  // namespace sqmx
