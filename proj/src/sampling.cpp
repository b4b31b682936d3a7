#include "sqmx/sampling.hpp"

#include <string>

#include "sqmx/errors.hpp"
#include "sqmx/rng.hpp"

namespace sqmx {

IndexSample sample_indices(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k < 1 || k > n) {
        throw InvalidRateError("sample_indices: k = " + std::to_string(k) +
                               " outside [1, n = " + std::to_string(n) + "]");
    }
    IndexSample s;
    s.universe = n;
    s.rate_numerator = k;
    s.seed = seed;
    const double rate = static_cast<double>(k) / static_cast<double>(n);
    SplitMix64 rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        if (rng.next_double() < rate) s.indices.push_back(i);
    }
    return s;
}

bool oversize_guard(const IndexSample& s, std::size_t k) {
    return s.indices.size() <= 2 * k;
}

DenseMatrix restrict_matrix(const DenseMatrix& a, const IndexSample& rows,
                            const IndexSample& cols) {
    if (rows.indices.empty() || cols.indices.empty()) {
        throw IndexOutOfRangeError("restrict_matrix: empty index sample");
    }
    for (std::size_t i : rows.indices)
        if (i >= a.rows())
            throw IndexOutOfRangeError("restrict_matrix: row index " + std::to_string(i) +
                                       " >= " + std::to_string(a.rows()));
    for (std::size_t j : cols.indices)
        if (j >= a.cols())
            throw IndexOutOfRangeError("restrict_matrix: col index " + std::to_string(j) +
                                       " >= " + std::to_string(a.cols()));

    DenseMatrix out(rows.indices.size(), cols.indices.size());
    for (std::size_t i = 0; i < rows.indices.size(); ++i) {
        const double* src = a.row_ptr(rows.indices[i]);
        double* dst = out.row_ptr(i);
        for (std::size_t j = 0; j < cols.indices.size(); ++j) dst[j] = src[cols.indices[j]];
    }
    return out;
}

Vector restrict_vector(const Vector& v, const IndexSample& s) {
    Vector out;
    out.reserve(s.indices.size());
    for (std::size_t i : s.indices) {
        if (i >= v.size())
            throw IndexOutOfRangeError("restrict_vector: index " + std::to_string(i) +
                                       " >= " + std::to_string(v.size()));
        out.push_back(v[i]);
    }
    return out;
}

}  // namespace sqmx
