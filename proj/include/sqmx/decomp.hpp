#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "sqmx/dense_matrix.hpp"

namespace sqmx {

// Derived bucketing constants for the structured/pseudorandom split at a
// given gamma and matrix shape. Buckets have width delta and tile
// [0, large_threshold); entries at or above the threshold belong to the
// Large set and round to zero.
struct BucketingParams {
    double gamma = 0.0;
    double epsilon = 0.0;           // gamma^8
    double j_bound = 0.0;           // J = 1/gamma^2, cap on the kept rank
    double delta_n = 0.0;           // epsilon / (J sqrt(n))
    double delta_m = 0.0;
    double large_threshold_n = 0.0;  // sqrt(J / (epsilon n))
    double large_threshold_m = 0.0;
    std::uint64_t bucket_count = 0;  // T = ceil((J/epsilon)^{3/2}), saturated

    static BucketingParams from(double gamma, std::size_t n, std::size_t m);
};

struct DecompositionDiagnostics {
    double psd_spectral_norm = 0.0;
    double str_max_norm = 0.0;
    std::size_t block_count = 0;
};

struct SpectralDecomposition {
    double gamma = 0.0;
    double entry_bound = 0.0;  // L of the input matrix

    // Cell id per row/column index; ids are dense in [0, *_cell_count).
    std::vector<std::size_t> row_cell;
    std::vector<std::size_t> col_cell;
    std::size_t row_cell_count = 0;
    std::size_t col_cell_count = 0;
    // Id of the Large cell, or npos when it is empty.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t row_large_cell = npos;
    std::size_t col_large_cell = npos;

    // Value of A^str on each (row cell, col cell) pair.
    DenseMatrix block_values{1, 1};

    std::size_t kept_rank = 0;
    Vector kept_sigma;
    DenseMatrix a_str{1, 1};
    DecompositionDiagnostics diagnostics;
};

// Constructive split A = A^str + A^psd: keep singular components with
// sigma >= gamma * sqrt(nm) * L, round the kept singular vectors onto bucket
// lower edges (sign preserved, Large entries zeroed), and build the block
// matrix from the common refinement of the per-component partitions.
SpectralDecomposition decompose(const DenseMatrix& a, double gamma);

struct BoundCheck {
    double observed = 0.0;
    double bound = 0.0;
    bool ok = false;
};

// ||A - A^str||_2 against 7 gamma N L, spectral norm via 200 power iterations.
BoundCheck verify_psd_norm(const DenseMatrix& a, const SpectralDecomposition& d, double gamma);

// ||A^str||_max against 2 L / gamma^11.
BoundCheck verify_str_max(const SpectralDecomposition& d, double entry_bound, double gamma);

// Number of nonempty blocks, Large cells included.
std::size_t count_blocks(const SpectralDecomposition& d);

void write_decomposition_report(const DenseMatrix& a, const SpectralDecomposition& d,
                                std::ostream& out);
void write_decomposition_report(const DenseMatrix& a, const SpectralDecomposition& d,
                                const std::string& path);

}  // namespace sqmx
