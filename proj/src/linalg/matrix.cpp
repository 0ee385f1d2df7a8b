#include "al/linalg/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "al/linalg/kernels.hpp"

namespace al::linalg {

namespace k = kernels::omp;
using kernels::kParallelThreshold;

Matrix::Matrix(std::size_t rows, std::size_t cols, Real fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<Real> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols)
        throw ShapeError("matrix data length " + std::to_string(data_.size()) +
                         " does not match shape " + shape_str());
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<Real>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    std::vector<Real> data;
    data.reserve(r * c);
    for (const auto& row : rows) {
        if (row.size() != c)
            throw ShapeError("ragged initializer: expected " + std::to_string(c) + " columns, got " +
                             std::to_string(row.size()));
        data.insert(data.end(), row.begin(), row.end());
    }
    return Matrix(r, c, std::move(data));
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1.0;
    return m;
}

std::string shape_str(std::size_t rows, std::size_t cols) {
    std::ostringstream os;
    os << '(' << rows << 'x' << cols << ')';
    return os.str();
}

std::string Matrix::shape_str() const { return linalg::shape_str(rows_, cols_); }

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
    if (!a.same_shape(b))
        throw ShapeError(std::string(op) + ": shape mismatch " + a.shape_str() + " vs " + b.shape_str());
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows())
        throw ShapeError("matmul: shape mismatch " + a.shape_str() + " x " + b.shape_str());
    Matrix c(a.rows(), b.cols());
    k::gemm(a.rows(), a.cols(), b.cols(), a.data(), b.data(), c.data());
    return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows())
        throw ShapeError("matmul_tn: shape mismatch " + a.shape_str() + "^T x " + b.shape_str());
    Matrix c(a.cols(), b.cols());
    k::gemm_tn(a.cols(), a.rows(), b.cols(), a.data(), b.data(), c.data());
    return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols())
        throw ShapeError("matmul_nt: shape mismatch " + a.shape_str() + " x " + b.shape_str() + "^T");
    Matrix c(a.rows(), b.rows());
    k::gemm_nt(a.rows(), a.cols(), b.rows(), a.data(), b.data(), c.data());
    return c;
}

namespace {

template <typename Op>
Matrix zip(const Matrix& a, const Matrix& b, const char* name, Op op) {
    require_same_shape(a, b, name);
    Matrix out(a.rows(), a.cols());
    const auto x = a.data();
    const auto y = b.data();
    auto z = out.data();
    const std::size_t n = z.size();
#pragma omp parallel for simd schedule(static) if (n > kParallelThreshold)
    for (std::size_t i = 0; i < n; ++i)
        z[i] = op(x[i], y[i]);
    return out;
}

}  // namespace

Matrix add(const Matrix& a, const Matrix& b) {
    return zip(a, b, "add", [](Real x, Real y) { return x + y; });
}

Matrix sub(const Matrix& a, const Matrix& b) {
    return zip(a, b, "sub", [](Real x, Real y) { return x - y; });
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
    return zip(a, b, "hadamard", [](Real x, Real y) { return x * y; });
}

Matrix scale(const Matrix& a, Real factor) {
    Matrix out = a;
    for (Real& v : out.data())
        v *= factor;
    return out;
}

Matrix transpose(const Matrix& a) {
    Matrix out(a.cols(), a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            out(c, r) = a(r, c);
    return out;
}

void add_row_inplace(Matrix& a, const Matrix& row) {
    if (row.rows() != 1 || row.cols() != a.cols())
        throw ShapeError("add_row: expected row " + shape_str(1, a.cols()) + ", got " + row.shape_str());
    const auto r = row.data();
    const std::size_t rows = a.rows();
    const std::size_t cols = a.cols();
    auto d = a.data();
#pragma omp parallel for schedule(static) if (rows * cols > kParallelThreshold)
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            d[i * cols + j] += r[j];
}

Matrix add_row(const Matrix& a, const Matrix& row) {
    Matrix out = a;
    add_row_inplace(out, row);
    return out;
}

Matrix col_sum(const Matrix& a) {
    Matrix out(1, a.cols());
    k::col_sum(a.rows(), a.cols(), a.data(), out.data());
    return out;
}

std::vector<std::size_t> row_argmax(const Matrix& a) {
    std::vector<std::size_t> out(a.rows(), 0);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        const auto row = a.row(r);
        std::size_t best = 0;
        for (std::size_t c = 1; c < row.size(); ++c)
            if (row[c] > row[best])
                best = c;
        out[r] = best;
    }
    return out;
}

Real sum(const Matrix& a) {
    Real s = 0.0;
    for (Real v : a.data())
        s += v;
    return s;
}

Real sum_squares(const Matrix& a) {
    Real s = 0.0;
    for (Real v : a.data())
        s += v * v;
    return s;
}

Real max_abs(const Matrix& a) {
    Real m = 0.0;
    for (Real v : a.data())
        m = std::max(m, std::abs(v));
    return m;
}

bool all_finite(const Matrix& a) noexcept {
    return std::all_of(a.data().begin(), a.data().end(), [](Real v) { return std::isfinite(v); });
}

Matrix gather_rows(const Matrix& a, std::span<const std::size_t> indices) {
    Matrix out(indices.size(), a.cols());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (indices[i] >= a.rows())
            throw ShapeError("gather_rows: index " + std::to_string(indices[i]) + " out of range for " +
                             a.shape_str());
        std::copy(a.row(indices[i]).begin(), a.row(indices[i]).end(), out.row(i).begin());
    }
    return out;
}

}  // namespace al::linalg
