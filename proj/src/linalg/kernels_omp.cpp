#include "al/linalg/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace al::linalg::kernels::omp {

namespace {

constexpr std::size_t kRowTile = 4;
constexpr std::size_t kDepthBlock = 256;
constexpr std::size_t kColBlock = 512;

void transpose_into(std::size_t rows, std::size_t cols, std::span<const Real> src, std::vector<Real>& dst) {
    dst.resize(rows * cols);
    constexpr std::size_t B = 32;
#pragma omp parallel for schedule(static) if (rows * cols > kParallelThreshold)
    for (std::size_t rb = 0; rb < rows; rb += B)
        for (std::size_t cb = 0; cb < cols; cb += B)
            for (std::size_t r = rb; r < std::min(rb + B, rows); ++r)
                for (std::size_t c = cb; c < std::min(cb + B, cols); ++c)
                    dst[c * rows + r] = src[r * cols + c];
}

// c rows [i0, i0+rows) += a[:, p0:p1] · b[p0:p1, j0:j1]
inline void micro_kernel(std::size_t i0, std::size_t rows, std::size_t k, std::size_t n,
                         std::size_t p0, std::size_t p1, std::size_t j0, std::size_t j1,
                         const Real* a, const Real* b, Real* c) {
    if (rows == kRowTile) {
        Real* c0 = c + (i0 + 0) * n;
        Real* c1 = c + (i0 + 1) * n;
        Real* c2 = c + (i0 + 2) * n;
        Real* c3 = c + (i0 + 3) * n;
        const Real* a0 = a + (i0 + 0) * k;
        const Real* a1 = a + (i0 + 1) * k;
        const Real* a2 = a + (i0 + 2) * k;
        const Real* a3 = a + (i0 + 3) * k;
        for (std::size_t p = p0; p < p1; ++p) {
            const Real v0 = a0[p], v1 = a1[p], v2 = a2[p], v3 = a3[p];
            const Real* bp = b + p * n;
#pragma omp simd
            for (std::size_t j = j0; j < j1; ++j) {
                const Real bv = bp[j];
                c0[j] += v0 * bv;
                c1[j] += v1 * bv;
                c2[j] += v2 * bv;
                c3[j] += v3 * bv;
            }
        }
        return;
    }
    for (std::size_t i = i0; i < i0 + rows; ++i) {
        Real* ci = c + i * n;
        const Real* ai = a + i * k;
        for (std::size_t p = p0; p < p1; ++p) {
            const Real v = ai[p];
            const Real* bp = b + p * n;
#pragma omp simd
            for (std::size_t j = j0; j < j1; ++j)
                ci[j] += v * bp[j];
        }
    }
}

}  // namespace

void gemm(std::size_t m, std::size_t k, std::size_t n,
          std::span<const Real> a, std::span<const Real> b, std::span<Real> c) {
    std::fill(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(m * n), 0.0);
    const std::size_t tiles = (m + kRowTile - 1) / kRowTile;
    const Real* ap = a.data();
    const Real* bp = b.data();
    Real* cp = c.data();
    // Static schedule hands the same row tiles to the same thread in every
    // block iteration, so `nowait` never lets two threads touch one row.
#pragma omp parallel if (m * k * n > kParallelThreshold)
    for (std::size_t j0 = 0; j0 < n; j0 += kColBlock) {
        const std::size_t j1 = std::min(j0 + kColBlock, n);
        for (std::size_t p0 = 0; p0 < k; p0 += kDepthBlock) {
            const std::size_t p1 = std::min(p0 + kDepthBlock, k);
#pragma omp for schedule(static) nowait
            for (std::size_t t = 0; t < tiles; ++t) {
                const std::size_t i0 = t * kRowTile;
                micro_kernel(i0, std::min(kRowTile, m - i0), k, n, p0, p1, j0, j1, ap, bp, cp);
            }
        }
    }
}

void gemm_nt(std::size_t m, std::size_t k, std::size_t n,
             std::span<const Real> a, std::span<const Real> b, std::span<Real> c) {
    std::vector<Real> bt;
    transpose_into(n, k, b, bt);
    gemm(m, k, n, a, bt, c);
}

void gemm_tn(std::size_t m, std::size_t k, std::size_t n,
             std::span<const Real> a, std::span<const Real> b, std::span<Real> c) {
    std::vector<Real> at;
    transpose_into(k, m, a, at);
    gemm(m, k, n, at, b, c);
}

void col_sum(std::size_t rows, std::size_t cols, std::span<const Real> a, std::span<Real> out) {
    constexpr std::size_t B = 64;
    const std::size_t blocks = (cols + B - 1) / B;
#pragma omp parallel for schedule(static) if (rows * cols > kParallelThreshold)
    for (std::size_t blk = 0; blk < blocks; ++blk) {
        const std::size_t j0 = blk * B;
        const std::size_t j1 = std::min(j0 + B, cols);
        for (std::size_t j = j0; j < j1; ++j)
            out[j] = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
            const Real* row = a.data() + r * cols;
            for (std::size_t j = j0; j < j1; ++j)
                out[j] += row[j];
        }
    }
}

Real pairwise_distance_sum(std::size_t n, std::size_t d, std::span<const Real> points) {
    std::vector<Real> partial(n, 0.0);
#pragma omp parallel for schedule(dynamic, 8) if (n * n * d / 2 > kParallelThreshold)
    for (std::size_t i = 0; i < n; ++i) {
        const Real* pi = points.data() + i * d;
        Real acc = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const Real* pj = points.data() + j * d;
            Real sq = 0.0;
            for (std::size_t f = 0; f < d; ++f) {
                const Real diff = pi[f] - pj[f];
                sq += diff * diff;
            }
            acc += std::sqrt(sq);
        }
        partial[i] = acc;
    }
    Real total = 0.0;
    for (Real v : partial)
        total += v;
    return total;
}

}  // namespace al::linalg::kernels::omp
