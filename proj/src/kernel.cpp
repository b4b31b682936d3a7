#include "sqmx/kernel.hpp"

#include <cmath>
#include <string>

#include "sqmx/errors.hpp"
#include "sqmx/rng.hpp"

namespace sqmx {

DenseMatrix rbf_gram(const std::vector<Vector>& points, double sigma) {
    if (!(sigma > 0.0)) throw InvalidArgumentError("rbf_gram: sigma must be positive");
    if (points.empty()) throw InvalidArgumentError("rbf_gram: no points");
    const std::size_t n = points.size();
    const std::size_t d = points.front().size();
    for (const Vector& p : points) {
        if (p.size() != d) throw DimensionError("rbf_gram: points have mixed dimensions");
    }
    const double inv = 1.0 / (2.0 * sigma * sigma);
    DenseMatrix k(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        k(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            double dist_sq = 0.0;
            for (std::size_t f = 0; f < d; ++f) {
                const double diff = points[i][f] - points[j][f];
                dist_sq += diff * diff;
            }
            const double value = std::exp(-dist_sq * inv);
            k(i, j) = value;
            k(j, i) = value;
        }
    }
    return k;
}

std::vector<Vector> synthesize_gaussian(std::size_t n, std::size_t d, std::uint64_t seed) {
    if (n < 1 || d < 1) throw InvalidArgumentError("synthesize_gaussian: n and d must be >= 1");
    SplitMix64 rng(seed);
    std::vector<Vector> points(n, Vector(d));
    for (Vector& p : points)
        for (double& x : p) x = rng.next_normal();
    return points;
}

}  // namespace sqmx
