#include "al/linalg/kernels.hpp"

#include <cmath>

namespace al::linalg::kernels::serial {

void gemm(std::size_t m, std::size_t k, std::size_t n,
          std::span<const Real> a, std::span<const Real> b, std::span<Real> c) {
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Real s = 0.0;
            for (std::size_t p = 0; p < k; ++p)
                s += a[i * k + p] * b[p * n + j];
            c[i * n + j] = s;
        }
}

void gemm_nt(std::size_t m, std::size_t k, std::size_t n,
             std::span<const Real> a, std::span<const Real> b, std::span<Real> c) {
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Real s = 0.0;
            for (std::size_t p = 0; p < k; ++p)
                s += a[i * k + p] * b[j * k + p];
            c[i * n + j] = s;
        }
}

void gemm_tn(std::size_t m, std::size_t k, std::size_t n,
             std::span<const Real> a, std::span<const Real> b, std::span<Real> c) {
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Real s = 0.0;
            for (std::size_t p = 0; p < k; ++p)
                s += a[p * m + i] * b[p * n + j];
            c[i * n + j] = s;
        }
}

void col_sum(std::size_t rows, std::size_t cols, std::span<const Real> a, std::span<Real> out) {
    for (std::size_t j = 0; j < cols; ++j) {
        Real s = 0.0;
        for (std::size_t r = 0; r < rows; ++r)
            s += a[r * cols + j];
        out[j] = s;
    }
}

Real pairwise_distance_sum(std::size_t n, std::size_t d, std::span<const Real> points) {
    Real total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            Real sq = 0.0;
            for (std::size_t f = 0; f < d; ++f) {
                const Real diff = points[i * d + f] - points[j * d + f];
                sq += diff * diff;
            }
            total += std::sqrt(sq);
        }
    return total;
}

}  // namespace al::linalg::kernels::serial
