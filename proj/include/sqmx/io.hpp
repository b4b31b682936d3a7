#pragma once

#include <string>
#include <vector>

#include "sqmx/dense_matrix.hpp"

namespace sqmx {

enum class MatrixFormat { Csv, Binary };

// CSV: comma-separated decimal floats, one matrix row per line, no header.
// Binary: magic "SQMX", version byte 1, two little-endian uint64 dims, then
// row-major little-endian IEEE-754 doubles.
DenseMatrix load_matrix(const std::string& path, MatrixFormat format);

void save_matrix(const DenseMatrix& a, const std::string& path, MatrixFormat format);

// Points CSV: one data point per row, equal dimension everywhere.
std::vector<Vector> load_points(const std::string& path);

}  // namespace sqmx
