#pragma once

#include <cstddef>
#include <vector>

namespace sqmx {

using Vector = std::vector<double>;

// Row-major dense real matrix. Construction validates that every entry is
// finite; dimensions are immutable after construction.
class DenseMatrix {
public:
    DenseMatrix(std::size_t rows, std::size_t cols);
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix zero(std::size_t rows, std::size_t cols);
    static DenseMatrix constant(std::size_t rows, std::size_t cols, double value);
    static DenseMatrix diagonal(const Vector& entries);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    const double* row_ptr(std::size_t i) const { return data_.data() + i * cols_; }
    double* row_ptr(std::size_t i) { return data_.data() + i * cols_; }

    DenseMatrix transposed() const;

    // y = A x
    Vector multiply(const Vector& x) const;
    // y = A^T x
    Vector multiply_transpose(const Vector& x) const;

    // Re-checks the finiteness invariant (used after file ingestion).
    void validate_finite() const;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

double dot(const Vector& a, const Vector& b);
double norm2(const Vector& v);

}  // namespace sqmx
