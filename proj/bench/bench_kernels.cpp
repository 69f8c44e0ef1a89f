// Serial reference vs OpenMP kernels, plus the heavier one-shot builders.

#include <benchmark/benchmark.h>

#include <cstddef>

#include "fracsum/fbm.hpp"
#include "fracsum/kernel.hpp"
#include "fracsum/limit.hpp"
#include "fracsum/linproc.hpp"
#include "fracsum/regvar.hpp"
#include "fracsum/rng.hpp"

using namespace fracsum;

namespace {

Kernel bench_kernel(std::size_t K) { return make_fractional_kernel(0.7, K); }

void bm_var_partial_sum_serial(benchmark::State& state) {
    const Kernel k = bench_kernel(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(var_partial_sum_serial(k, 4096));
}

void bm_var_partial_sum_parallel(benchmark::State& state) {
    const Kernel k = bench_kernel(static_cast<std::size_t>(state.range(0)));
    const int workers = static_cast<int>(state.range(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(var_partial_sum(k, 4096, workers));
}

void bm_exact_var_R(benchmark::State& state) {
    const Kernel k = bench_kernel(4096);
    const MemoryFunction M(SlowlyVarying::constant(1.0), 2.0);
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const int workers = static_cast<int>(state.range(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(exact_var_R(k, M, n, workers));
}

void bm_var_Z_one_quad(benchmark::State& state) {
    const int workers = static_cast<int>(state.range(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(
            var_Z_one_quad(2.0, 0.7, static_cast<std::size_t>(state.range(0)), workers));
}

void bm_cholesky_build(benchmark::State& state) {
    const TimeGrid grid{static_cast<std::size_t>(state.range(0))};
    const int workers = static_cast<int>(state.range(1));
    for (auto _ : state) {
        FbmSampler sampler(grid, 0.7, FbmMethod::cholesky, workers);
        benchmark::DoNotOptimize(&sampler);
    }
}

void bm_sample_walk(benchmark::State& state) {
    const Kernel k = bench_kernel(static_cast<std::size_t>(state.range(0)));
    const MemoryFunction M(SlowlyVarying::constant(1.0), 1.0);
    const InnovationModel innov = InnovationModel::gaussian();
    std::uint64_t trial = 0;
    for (auto _ : state) {
        auto rng = rng::make_stream(1, "bench/walk", trial++);
        benchmark::DoNotOptimize(sample_walk(k, M, innov, 1024, rng));
    }
}

BENCHMARK(bm_var_partial_sum_serial)->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(bm_var_partial_sum_parallel)
    ->Args({1 << 12, 1})
    ->Args({1 << 12, 4})
    ->Args({1 << 16, 1})
    ->Args({1 << 16, 4});
BENCHMARK(bm_exact_var_R)->Args({1024, 1})->Args({1024, 4})->Args({4096, 1})->Args({4096, 4});
BENCHMARK(bm_var_Z_one_quad)->Args({1024, 1})->Args({1024, 4})->Args({4096, 1})->Args({4096, 4});
BENCHMARK(bm_cholesky_build)->Args({512, 1})->Args({512, 4})->Args({1024, 1})->Args({1024, 4});
BENCHMARK(bm_sample_walk)->Arg(1 << 8)->Arg(1 << 14);

}  // namespace

BENCHMARK_MAIN();
