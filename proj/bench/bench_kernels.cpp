// Serial reference kernels against their OpenMP counterparts.
// Run with OMP_NUM_THREADS set to the core count you want to measure.

#include <benchmark/benchmark.h>

#include <vector>

#include "al/linalg/kernels.hpp"
#include "al/linalg/rng.hpp"

namespace k = al::linalg::kernels;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
    al::linalg::Rng rng(seed);
    std::vector<double> v(n);
    for (auto& x : v)
        x = rng.normal();
    return v;
}

// Square-ish layer shapes: batch 128 against width N.
template <auto Kernel>
void BM_gemm(benchmark::State& state) {
    const std::size_t m = 128, n = static_cast<std::size_t>(state.range(0)), kk = n;
    const auto a = random_vec(m * kk, 1), b = random_vec(kk * n, 2);
    std::vector<double> c(m * n);
    for (auto _ : state) {
        Kernel(m, kk, n, a, b, c);
        benchmark::DoNotOptimize(c.data());
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * 2 * m * n * kk));
}

template <auto Kernel>
void BM_gemm_tn(benchmark::State& state) {
    // Weight gradient: (batch×in)ᵀ · (batch×out).
    const std::size_t batch = 128, n = static_cast<std::size_t>(state.range(0));
    const auto a = random_vec(batch * n, 3), b = random_vec(batch * n, 4);
    std::vector<double> c(n * n);
    for (auto _ : state) {
        Kernel(n, batch, n, a, b, c);
        benchmark::DoNotOptimize(c.data());
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * 2 * n * n * batch));
}

template <auto Kernel>
void BM_gemm_nt(benchmark::State& state) {
    // Input gradient: (batch×out) · (in×out)ᵀ.
    const std::size_t batch = 128, n = static_cast<std::size_t>(state.range(0));
    const auto a = random_vec(batch * n, 5), b = random_vec(n * n, 6);
    std::vector<double> c(batch * n);
    for (auto _ : state) {
        Kernel(batch, n, n, a, b, c);
        benchmark::DoNotOptimize(c.data());
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * 2 * n * n * batch));
}

template <auto Kernel>
void BM_col_sum(benchmark::State& state) {
    const std::size_t rows = 128, cols = static_cast<std::size_t>(state.range(0));
    const auto a = random_vec(rows * cols, 7);
    std::vector<double> out(cols);
    for (auto _ : state) {
        Kernel(rows, cols, a, out);
        benchmark::DoNotOptimize(out.data());
    }
}

template <auto Kernel>
void BM_pairwise(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0)), d = 128;
    const auto p = random_vec(n * d, 8);
    for (auto _ : state)
        benchmark::DoNotOptimize(Kernel(n, d, p));
}

}  // namespace

BENCHMARK(BM_gemm<k::serial::gemm>)->Name("gemm/serial")->Arg(256)->Arg(1024);
BENCHMARK(BM_gemm<k::omp::gemm>)->Name("gemm/omp")->Arg(256)->Arg(1024)->UseRealTime();
BENCHMARK(BM_gemm_tn<k::serial::gemm_tn>)->Name("gemm_tn/serial")->Arg(256)->Arg(1024);
BENCHMARK(BM_gemm_tn<k::omp::gemm_tn>)->Name("gemm_tn/omp")->Arg(256)->Arg(1024)->UseRealTime();
BENCHMARK(BM_gemm_nt<k::serial::gemm_nt>)->Name("gemm_nt/serial")->Arg(256)->Arg(1024);
BENCHMARK(BM_gemm_nt<k::omp::gemm_nt>)->Name("gemm_nt/omp")->Arg(256)->Arg(1024)->UseRealTime();
BENCHMARK(BM_col_sum<k::serial::col_sum>)->Name("col_sum/serial")->Arg(1024)->Arg(8192);
BENCHMARK(BM_col_sum<k::omp::col_sum>)->Name("col_sum/omp")->Arg(1024)->Arg(8192)->UseRealTime();
BENCHMARK(BM_pairwise<k::serial::pairwise_distance_sum>)->Name("pairwise/serial")->Arg(500)->Arg(2000);
BENCHMARK(BM_pairwise<k::omp::pairwise_distance_sum>)->Name("pairwise/omp")->Arg(500)->Arg(2000)->UseRealTime();

BENCHMARK_MAIN();
