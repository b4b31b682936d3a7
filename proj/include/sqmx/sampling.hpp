#pragma once

#include <cstdint>

#include "sqmx/dense_matrix.hpp"

namespace sqmx {

// A Bernoulli index sample: each index of [0, universe) kept independently
// with probability rate_numerator / universe, driven by the pinned RNG.
struct IndexSample {
    std::size_t universe = 0;
    std::size_t rate_numerator = 0;
    std::vector<std::size_t> indices;  // strictly increasing
    std::uint64_t seed = 0;

    std::size_t size() const { return indices.size(); }
};

IndexSample sample_indices(std::size_t n, std::size_t k, std::uint64_t seed);

// True iff |S| <= 2k; estimators abort when this fails.
bool oversize_guard(const IndexSample& s, std::size_t k);

DenseMatrix restrict_matrix(const DenseMatrix& a, const IndexSample& rows,
                            const IndexSample& cols);

Vector restrict_vector(const Vector& v, const IndexSample& s);

}  // namespace sqmx
