// Kernel benchmarks: serial reference vs OpenMP variants, plus the two
// resolvent quadrature routes.
//
//   cmake --build build --target kreinspec_bench && ./build/bench/kreinspec_bench

#include <benchmark/benchmark.h>

#include <random>

#include "kreinspec/kernels.hpp"
#include "kreinspec/riesz.hpp"
#include "kreinspec/sampling.hpp"

using namespace kreinspec;

namespace {

ComplexMatrix sized_random(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return sampling::random_matrix(rng, n);
}

void bm_gemm_serial(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    ComplexMatrix a = sized_random(n, 1), b = sized_random(n, 2);
    for (auto _ : state) {
        ComplexMatrix c = kernels::gemm_serial(a, b);
        benchmark::DoNotOptimize(c.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n * n));
}

void bm_gemm_parallel(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    ComplexMatrix a = sized_random(n, 1), b = sized_random(n, 2);
    for (auto _ : state) {
        ComplexMatrix c = kernels::gemm_parallel(a, b);
        benchmark::DoNotOptimize(c.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n * n));
}

ComplexMatrix spread_hermitian(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    ComplexMatrix m = sampling::random_hermitian(rng, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) += cplx(3.0 * static_cast<double>(i), 0.0);
    return m;
}

void bm_riesz_direct(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    ComplexMatrix m = spread_hermitian(n, 3);
    Tolerances tol;
    tol.exact_riesz_max_n = 4096;  // force the LU route
    RieszContext ctx(m, tol);
    for (auto _ : state) {
        ProjectionResult p = riesz_projection(ctx, {0}, 0, RieszPath::Direct);
        benchmark::DoNotOptimize(p.p.data());
    }
}

void bm_riesz_cached(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    ComplexMatrix m = spread_hermitian(n, 3);
    RieszContext ctx(m);
    for (auto _ : state) {
        ProjectionResult p = riesz_projection(ctx, {0}, 0, RieszPath::Cached);
        benchmark::DoNotOptimize(p.p.data());
    }
}

}  // namespace

BENCHMARK(bm_gemm_serial)->Arg(64)->Arg(128)->Arg(199)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_gemm_parallel)->Arg(64)->Arg(128)->Arg(199)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_riesz_direct)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_riesz_cached)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
