#pragma once

// Raw row-major kernels. `serial` holds the textbook reference loops kept for
// testing and benchmarking; `omp` holds the OpenMP versions used by Matrix.
//
// Every omp kernel assigns each output element to exactly one thread and
// accumulates it in the same order regardless of the team size, so results
// do not depend on OMP_NUM_THREADS.

#include <cstddef>
#include <span>

namespace al::linalg::kernels {

using Real = double;

namespace serial {

// c(m×n) = a(m×k) · b(k×n)
void gemm(std::size_t m, std::size_t k, std::size_t n,
          std::span<const Real> a, std::span<const Real> b, std::span<Real> c);
// c(m×n) = a(m×k) · b(n×k)ᵀ
void gemm_nt(std::size_t m, std::size_t k, std::size_t n,
             std::span<const Real> a, std::span<const Real> b, std::span<Real> c);
// c(m×n) = a(k×m)ᵀ · b(k×n)
void gemm_tn(std::size_t m, std::size_t k, std::size_t n,
             std::span<const Real> a, std::span<const Real> b, std::span<Real> c);
void col_sum(std::size_t rows, std::size_t cols, std::span<const Real> a, std::span<Real> out);
// Sum of Euclidean distances over all unordered pairs of the n points (n×d).
Real pairwise_distance_sum(std::size_t n, std::size_t d, std::span<const Real> points);

}  // namespace serial

namespace omp {

void gemm(std::size_t m, std::size_t k, std::size_t n,
          std::span<const Real> a, std::span<const Real> b, std::span<Real> c);
void gemm_nt(std::size_t m, std::size_t k, std::size_t n,
             std::span<const Real> a, std::span<const Real> b, std::span<Real> c);
void gemm_tn(std::size_t m, std::size_t k, std::size_t n,
             std::span<const Real> a, std::span<const Real> b, std::span<Real> c);
void col_sum(std::size_t rows, std::size_t cols, std::span<const Real> a, std::span<Real> out);
Real pairwise_distance_sum(std::size_t n, std::size_t d, std::span<const Real> points);

}  // namespace omp

// Loops with fewer multiply-adds than this stay on the calling thread.
inline constexpr std::size_t kParallelThreshold = 1u << 15;

}  // namespace al::linalg::kernels
