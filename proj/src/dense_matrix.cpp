#include "sqmx/dense_matrix.hpp"

#include <cmath>
#include <string>

#include "sqmx/errors.hpp"

namespace sqmx {

namespace {

void check_dims(std::size_t rows, std::size_t cols) {
    if (rows < 1 || cols < 1) {
        throw DimensionError("DenseMatrix requires rows >= 1 and cols >= 1, got " +
                             std::to_string(rows) + "x" + std::to_string(cols));
    }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
    check_dims(rows, cols);
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    check_dims(rows, cols);
    if (data_.size() != rows_ * cols_) {
        throw DimensionError("DenseMatrix data length " + std::to_string(data_.size()) +
                             " does not match " + std::to_string(rows_) + "x" +
                             std::to_string(cols_));
    }
    validate_finite();
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::zero(std::size_t rows, std::size_t cols) {
    return DenseMatrix(rows, cols);
}

DenseMatrix DenseMatrix::constant(std::size_t rows, std::size_t cols, double value) {
    DenseMatrix m(rows, cols);
    for (double& x : m.data_) x = value;
    m.validate_finite();
    return m;
}

DenseMatrix DenseMatrix::diagonal(const Vector& entries) {
    DenseMatrix m(entries.size(), entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
    m.validate_finite();
    return m;
}

DenseMatrix DenseMatrix::transposed() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Vector DenseMatrix::multiply(const Vector& x) const {
    if (x.size() != cols_) {
        throw DimensionError("matvec: vector length " + std::to_string(x.size()) +
                             " != cols " + std::to_string(cols_));
    }
    Vector y(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        const double* row = row_ptr(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
    return y;
}

Vector DenseMatrix::multiply_transpose(const Vector& x) const {
    if (x.size() != rows_) {
        throw DimensionError("matvec^T: vector length " + std::to_string(x.size()) +
                             " != rows " + std::to_string(rows_));
    }
    Vector y(cols_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        const double* row = row_ptr(i);
        const double xi = x[i];
        for (std::size_t j = 0; j < cols_; ++j) y[j] += xi * row[j];
    }
    return y;
}

void DenseMatrix::validate_finite() const {
    for (std::size_t idx = 0; idx < data_.size(); ++idx) {
        if (!std::isfinite(data_[idx])) {
            throw NonFiniteEntryError("non-finite entry at row " + std::to_string(idx / cols_) +
                                      ", col " + std::to_string(idx % cols_));
        }
    }
}

double dot(const Vector& a, const Vector& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double norm2(const Vector& v) {
    return std::sqrt(dot(v, v));
}

}  // namespace sqmx
