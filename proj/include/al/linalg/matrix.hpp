#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace al::linalg {

using Real = double;

class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Dense row-major matrix. Rows are samples, columns are features.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, Real fill = 0.0);
    Matrix(std::size_t rows, std::size_t cols, std::vector<Real> data);

    static Matrix from_rows(std::initializer_list<std::initializer_list<Real>> rows);
    static Matrix zeros(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }
    static Matrix ones(std::size_t rows, std::size_t cols) { return Matrix(rows, cols, 1.0); }
    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    Real& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    Real operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<Real> data() noexcept { return data_; }
    std::span<const Real> data() const noexcept { return data_; }
    std::span<Real> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const Real> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

    std::string shape_str() const;
    bool same_shape(const Matrix& other) const noexcept {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Real> data_;
};

std::string shape_str(std::size_t rows, std::size_t cols);

// Products. matmul_tn computes aᵀ·b, matmul_nt computes a·bᵀ.
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix matmul_tn(const Matrix& a, const Matrix& b);
Matrix matmul_nt(const Matrix& a, const Matrix& b);

Matrix add(const Matrix& a, const Matrix& b);
Matrix sub(const Matrix& a, const Matrix& b);
Matrix hadamard(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, Real factor);
Matrix transpose(const Matrix& a);

// a + broadcast(row) over every row of a; row must be 1 × a.cols().
Matrix add_row(const Matrix& a, const Matrix& row);
void add_row_inplace(Matrix& a, const Matrix& row);
// Column sums as a 1 × cols matrix.
Matrix col_sum(const Matrix& a);

// Index of the largest entry per row, ties resolved toward the lowest index.
std::vector<std::size_t> row_argmax(const Matrix& a);

Real sum(const Matrix& a);
Real sum_squares(const Matrix& a);
Real max_abs(const Matrix& a);
bool all_finite(const Matrix& a) noexcept;

// Copy of the rows listed in `indices`, in order.
Matrix gather_rows(const Matrix& a, std::span<const std::size_t> indices);

// Throws ShapeError naming both shapes when they differ.
void require_same_shape(const Matrix& a, const Matrix& b, const char* op);

}  // namespace al::linalg
