#include "sqmx/svest.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sqmx/errors.hpp"
#include "sqmx/linalg.hpp"

namespace sqmx {

namespace {

struct SamplePair {
    IndexSample rows;
    IndexSample cols;
    double scale;  // nm / (|S_R| |S_C|)
};

SamplePair draw_samples(const DenseMatrix& a, std::size_t k, std::uint64_t seed, SampleMode mode) {
    const std::size_t n = a.rows();
    const std::size_t m = a.cols();
    if (k < 1 || k > std::min(n, m)) {
        throw InvalidRateError("singular value estimator: k = " + std::to_string(k) +
                               " outside [1, min(n, m) = " + std::to_string(std::min(n, m)) + "]");
    }
    if (mode == SampleMode::Symmetric && n != m) {
        throw DimensionError("symmetric sampling requires a square matrix");
    }
    SamplePair out;
    out.rows = sample_indices(n, k, seed);
    out.cols = (mode == SampleMode::Symmetric) ? out.rows : sample_indices(m, k, seed + 1);
    if (!oversize_guard(out.rows, k) || !oversize_guard(out.cols, k)) {
        throw AbortedError("singular value estimator: sample exceeded 2k = " +
                           std::to_string(2 * k));
    }
    if (out.rows.indices.empty() || out.cols.indices.empty()) {
        throw AbortedError("singular value estimator: empty sample");
    }
    out.scale = (static_cast<double>(n) * static_cast<double>(m)) /
                (static_cast<double>(out.rows.size()) * static_cast<double>(out.cols.size()));
    return out;
}

}  // namespace

double rank_residual(const DenseMatrix& b, std::size_t t) {
    const std::size_t r = std::min(b.rows(), b.cols());
    if (t > r) {
        throw RankError("rank_residual: t = " + std::to_string(t) + " exceeds min dims " +
                        std::to_string(r));
    }
    const double fro = frobenius_norm(b);
    double kept = 0.0;
    if (t > 0) {
        const Vector sigma = svd(b).singular_values;
        for (std::size_t l = 0; l < t; ++l) kept += sigma[l] * sigma[l];
    }
    return std::max(fro * fro - kept, 0.0);
}

SvEstimate estimate_sigma1(const DenseMatrix& a, std::size_t k, std::uint64_t seed,
                           SampleMode mode) {
    SamplePair sp = draw_samples(a, k, seed, mode);
    const DenseMatrix sub = restrict_matrix(a, sp.rows, sp.cols);
    const double sigma1 = top_singular_values(sub, 1, 20, seed + 2)[0];

    SvEstimate est;
    est.t = 1;
    est.estimate = std::sqrt(sp.scale) * sigma1;
    const double fro = frobenius_norm(sub);
    est.lambda_t_minus_1 = sp.scale * fro * fro;  // scaled Lambda_0
    est.lambda_t = std::max(est.lambda_t_minus_1 - est.estimate * est.estimate, 0.0);
    est.row_sample = std::move(sp.rows);
    est.col_sample = std::move(sp.cols);
    return est;
}

SvEstimate estimate_sigma_t(const DenseMatrix& a, std::size_t t, std::size_t k,
                            std::uint64_t seed, SampleMode mode) {
    if (k < 1 || k > std::min(a.rows(), a.cols())) {
        throw InvalidRateError("estimate_sigma_t: k = " + std::to_string(k) +
                               " outside [1, min(n, m)]");
    }
    if (t < 1 || t > k || t > std::min(a.rows(), a.cols())) {
        throw RankError("estimate_sigma_t: t = " + std::to_string(t) +
                        " must satisfy 1 <= t <= k and t <= min(n, m)");
    }
    SamplePair sp = draw_samples(a, k, seed, mode);
    const DenseMatrix sub = restrict_matrix(a, sp.rows, sp.cols);
    if (t > std::min(sub.rows(), sub.cols())) {
        throw RankError("estimate_sigma_t: t = " + std::to_string(t) +
                        " exceeds sampled dimensions " + std::to_string(sub.rows()) + "x" +
                        std::to_string(sub.cols()));
    }

    // One SVD of the small restriction yields both residuals.
    const Vector sigma = svd(sub).singular_values;
    const double fro = frobenius_norm(sub);
    double kept = 0.0;
    for (std::size_t l = 0; l + 1 < t; ++l) kept += sigma[l] * sigma[l];
    const double resid_tm1 = std::max(fro * fro - kept, 0.0);
    kept += sigma[t - 1] * sigma[t - 1];
    const double resid_t = std::max(fro * fro - kept, 0.0);

    SvEstimate est;
    est.t = t;
    est.lambda_t_minus_1 = sp.scale * resid_tm1;
    est.lambda_t = sp.scale * resid_t;
    est.estimate = std::sqrt(std::max(est.lambda_t_minus_1 - est.lambda_t, 0.0));
    est.row_sample = std::move(sp.rows);
    est.col_sample = std::move(sp.cols);
    return est;
}

}  // namespace sqmx
