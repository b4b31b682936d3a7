#include "sqmx/decomp.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <string>

#include "sqmx/errors.hpp"
#include "sqmx/linalg.hpp"

namespace sqmx {

namespace {

constexpr std::uint64_t kVerifierSeed = 0x5eedULL;

// Per-index label under one kept component: bucket index and sign, or the
// Large marker. Zero-bucket entries round to 0 either way, so their sign is
// normalized to avoid splitting a constant cell.
struct CellLabeler {
    double delta = 0.0;
    double large_threshold = 0.0;

    bool is_large(double entry) const { return std::abs(entry) >= large_threshold; }

    std::int64_t label(double entry) const {
        const double mag = std::abs(entry);
        const auto bucket = static_cast<std::int64_t>(std::floor(mag / delta));
        if (bucket == 0) return 0;
        return entry < 0.0 ? -bucket : bucket;
    }

    double rounded(double entry) const {
        if (is_large(entry)) return 0.0;
        const double mag = std::abs(entry);
        const double value = delta * std::floor(mag / delta);
        return entry < 0.0 ? -value : value;
    }
};

struct PartitionResult {
    std::vector<std::size_t> cell;   // per index
    std::size_t cell_count = 0;
    std::size_t large_cell = SpectralDecomposition::npos;
    // Rounded vector value per (cell, component).
    std::vector<Vector> cell_values;
};

// Builds the common refinement over all kept components. vectors[l] is the
// l-th kept singular vector (length dim); indices that are Large for any
// component land in one shared Large cell with all rounded values zero.
PartitionResult build_partition(const std::vector<Vector>& vectors, std::size_t dim,
                                const CellLabeler& labeler) {
    PartitionResult out;
    out.cell.assign(dim, 0);
    const std::size_t kept = vectors.size();

    std::map<std::vector<std::int64_t>, std::size_t> key_to_cell;
    std::vector<std::int64_t> key(kept);
    for (std::size_t i = 0; i < dim; ++i) {
        bool large = false;
        for (std::size_t l = 0; l < kept && !large; ++l) large = labeler.is_large(vectors[l][i]);
        if (large) {
            if (out.large_cell == SpectralDecomposition::npos) {
                out.large_cell = out.cell_count++;
                out.cell_values.emplace_back(kept, 0.0);
            }
            out.cell[i] = out.large_cell;
            continue;
        }
        for (std::size_t l = 0; l < kept; ++l) key[l] = labeler.label(vectors[l][i]);
        auto [it, inserted] = key_to_cell.try_emplace(key, out.cell_count);
        if (inserted) {
            ++out.cell_count;
            Vector values(kept);
            for (std::size_t l = 0; l < kept; ++l) values[l] = labeler.rounded(vectors[l][i]);
            out.cell_values.push_back(std::move(values));
        }
        out.cell[i] = it->second;
    }
    if (out.cell_count == 0) {
        // No kept components: everything is one cell.
        out.cell_count = 1;
        out.cell_values.emplace_back(kept, 0.0);
    }
    return out;
}

SpectralDecomposition trivial_decomposition(const DenseMatrix& a, double gamma, double l) {
    SpectralDecomposition d;
    d.gamma = gamma;
    d.entry_bound = l;
    d.row_cell.assign(a.rows(), 0);
    d.col_cell.assign(a.cols(), 0);
    d.row_cell_count = 1;
    d.col_cell_count = 1;
    d.block_values = DenseMatrix::zero(1, 1);
    d.kept_rank = 0;
    d.a_str = DenseMatrix::zero(a.rows(), a.cols());
    d.diagnostics.str_max_norm = 0.0;
    d.diagnostics.block_count = 1;
    d.diagnostics.psd_spectral_norm =
        power_iteration_sigma1(a, 200, kVerifierSeed);
    return d;
}

}  // namespace

BucketingParams BucketingParams::from(double gamma, std::size_t n, std::size_t m) {
    if (!(gamma > 0.0) || !(gamma < 1.0)) {
        throw InvalidArgumentError("bucketing: gamma must lie in (0, 1)");
    }
    BucketingParams p;
    p.gamma = gamma;
    p.epsilon = std::pow(gamma, 8);
    p.j_bound = 1.0 / (gamma * gamma);
    p.delta_n = p.epsilon / (p.j_bound * std::sqrt(static_cast<double>(n)));
    p.delta_m = p.epsilon / (p.j_bound * std::sqrt(static_cast<double>(m)));
    p.large_threshold_n = std::sqrt(p.j_bound / (p.epsilon * static_cast<double>(n)));
    p.large_threshold_m = std::sqrt(p.j_bound / (p.epsilon * static_cast<double>(m)));
    const double t_real = std::ceil(std::pow(p.j_bound / p.epsilon, 1.5));
    p.bucket_count = t_real >= static_cast<double>(std::numeric_limits<std::uint64_t>::max())
                         ? std::numeric_limits<std::uint64_t>::max()
                         : static_cast<std::uint64_t>(t_real);
    return p;
}

SpectralDecomposition decompose(const DenseMatrix& a, double gamma) {
    if (!(gamma > 0.0) || !(gamma < 1.0)) {
        throw InvalidArgumentError("decompose: gamma must lie in (0, 1)");
    }
    const std::size_t n = a.rows();
    const std::size_t m = a.cols();
    const double l = max_norm(a);
    if (l == 0.0) return trivial_decomposition(a, gamma, l);

    const double big_n = std::sqrt(static_cast<double>(n) * static_cast<double>(m));
    const double sigma_threshold = gamma * big_n * l;
    const SvdResult factorization = svd(a);

    std::size_t kept = 0;
    while (kept < factorization.singular_values.size() &&
           factorization.singular_values[kept] >= sigma_threshold) {
        ++kept;
    }
    if (kept == 0) return trivial_decomposition(a, gamma, l);

    const BucketingParams params = BucketingParams::from(gamma, n, m);

    std::vector<Vector> left(kept, Vector(n));
    std::vector<Vector> right(kept, Vector(m));
    for (std::size_t lidx = 0; lidx < kept; ++lidx) {
        for (std::size_t i = 0; i < n; ++i) left[lidx][i] = factorization.left_vectors(i, lidx);
        for (std::size_t j = 0; j < m; ++j) right[lidx][j] = factorization.right_vectors(j, lidx);
    }

    const CellLabeler row_labeler{params.delta_n, params.large_threshold_n};
    const CellLabeler col_labeler{params.delta_m, params.large_threshold_m};
    PartitionResult rows = build_partition(left, n, row_labeler);
    PartitionResult cols = build_partition(right, m, col_labeler);

    SpectralDecomposition d;
    d.gamma = gamma;
    d.entry_bound = l;
    d.kept_rank = kept;
    d.kept_sigma.assign(factorization.singular_values.begin(),
                        factorization.singular_values.begin() + static_cast<std::ptrdiff_t>(kept));
    d.row_cell = std::move(rows.cell);
    d.col_cell = std::move(cols.cell);
    d.row_cell_count = rows.cell_count;
    d.col_cell_count = cols.cell_count;
    d.row_large_cell = rows.large_cell;
    d.col_large_cell = cols.large_cell;

    // Block values once per cell pair; A^str is filled from them so block
    // constancy holds exactly.
    d.block_values = DenseMatrix(d.row_cell_count, d.col_cell_count);
    for (std::size_t rc = 0; rc < d.row_cell_count; ++rc) {
        for (std::size_t cc = 0; cc < d.col_cell_count; ++cc) {
            double value = 0.0;
            for (std::size_t lidx = 0; lidx < kept; ++lidx) {
                value += d.kept_sigma[lidx] * rows.cell_values[rc][lidx] *
                         cols.cell_values[cc][lidx];
            }
            d.block_values(rc, cc) = value;
        }
    }
    d.a_str = DenseMatrix(n, m);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t rc = d.row_cell[i];
        for (std::size_t j = 0; j < m; ++j) d.a_str(i, j) = d.block_values(rc, d.col_cell[j]);
    }

    d.diagnostics.str_max_norm = max_norm(d.a_str);
    d.diagnostics.block_count = count_blocks(d);
    d.diagnostics.psd_spectral_norm = verify_psd_norm(a, d, gamma).observed;
    return d;
}

BoundCheck verify_psd_norm(const DenseMatrix& a, const SpectralDecomposition& d, double gamma) {
    if (a.rows() != d.a_str.rows() || a.cols() != d.a_str.cols()) {
        throw DimensionError("verify_psd_norm: decomposition shape does not match matrix");
    }
    DenseMatrix psd(a.rows(), a.cols());
    for (std::size_t idx = 0; idx < psd.data().size(); ++idx) {
        psd.data()[idx] = a.data()[idx] - d.a_str.data()[idx];
    }
    BoundCheck check;
    check.observed = power_iteration_sigma1(psd, 200, kVerifierSeed);
    const double big_n = std::sqrt(static_cast<double>(a.rows()) * static_cast<double>(a.cols()));
    check.bound = 7.0 * gamma * big_n * max_norm(a);
    check.ok = check.observed <= check.bound;
    return check;
}

BoundCheck verify_str_max(const SpectralDecomposition& d, double entry_bound, double gamma) {
    BoundCheck check;
    check.observed = max_norm(d.a_str);
    check.bound = 2.0 * entry_bound / std::pow(gamma, 11);
    check.ok = check.observed <= check.bound;
    return check;
}

std::size_t count_blocks(const SpectralDecomposition& d) {
    return d.row_cell_count * d.col_cell_count;
}

void write_decomposition_report(const DenseMatrix& a, const SpectralDecomposition& d,
                                std::ostream& out) {
    out << "spectral decomposition report\n";
    out << "gamma: " << d.gamma << "\n";
    out << "rows: " << a.rows() << "\ncols: " << a.cols() << "\n";
    out << "entry_bound: " << d.entry_bound << "\n";
    out << "kept_rank: " << d.kept_rank << "\n";
    out << "kept_sigma:";
    for (double s : d.kept_sigma) out << " " << s;
    out << "\n";
    out << "row_cells: " << d.row_cell_count << "\ncol_cells: " << d.col_cell_count << "\n";

    std::vector<std::size_t> row_sizes(d.row_cell_count, 0);
    for (std::size_t c : d.row_cell) ++row_sizes[c];
    std::vector<std::size_t> col_sizes(d.col_cell_count, 0);
    for (std::size_t c : d.col_cell) ++col_sizes[c];
    out << "row_cell_sizes:";
    for (std::size_t s : row_sizes) out << " " << s;
    out << "\ncol_cell_sizes:";
    for (std::size_t s : col_sizes) out << " " << s;
    out << "\n";
    out << "row_large_cell: "
        << (d.row_large_cell == SpectralDecomposition::npos
                ? std::string("none")
                : std::to_string(d.row_large_cell))
        << "\n";
    out << "col_large_cell: "
        << (d.col_large_cell == SpectralDecomposition::npos
                ? std::string("none")
                : std::to_string(d.col_large_cell))
        << "\n";
    out << "block_count: " << d.diagnostics.block_count << "\n";

    const BoundCheck psd = verify_psd_norm(a, d, d.gamma);
    const BoundCheck str = verify_str_max(d, d.entry_bound, d.gamma);
    out << "psd_spectral_norm: " << psd.observed << " bound: " << psd.bound << " ok: "
        << (psd.ok ? "yes" : "no") << "\n";
    out << "str_max_norm: " << str.observed << " bound: " << str.bound << " ok: "
        << (str.ok ? "yes" : "no") << "\n";
}

void write_decomposition_report(const DenseMatrix& a, const SpectralDecomposition& d,
                                const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open report file: " + path);
    write_decomposition_report(a, d, out);
    if (!out) throw IoError("failed writing report file: " + path);
}

}  // namespace sqmx
