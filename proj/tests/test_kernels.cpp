#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "kreinspec/kernels.hpp"

using namespace kreinspec;

namespace {

ComplexMatrix random_mn(std::mt19937_64& rng, std::size_t m, std::size_t n) {
    std::normal_distribution<double> g;
    ComplexMatrix a(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = cplx(g(rng), g(rng));
    return a;
}

}  // namespace

TEST_CASE("serial gemm matches a hand-rolled reference") {
    std::mt19937_64 rng(11);
    ComplexMatrix a = random_mn(rng, 5, 7), b = random_mn(rng, 7, 4);
    ComplexMatrix c = kernels::gemm_serial(a, b);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            cplx s = 0.0;
            for (std::size_t k = 0; k < 7; ++k) s += a(i, k) * b(k, j);
            CHECK(std::abs(c(i, j) - s) <= 1e-13 * std::abs(s) + 1e-13);
        }
}

TEST_CASE("parallel gemm agrees with the serial reference") {
    std::mt19937_64 rng(12);
    for (std::size_t n : {3u, 17u, 64u, 130u}) {
        ComplexMatrix a = random_mn(rng, n, n), b = random_mn(rng, n, n);
        ComplexMatrix cs = kernels::gemm_serial(a, b);
        ComplexMatrix cp = kernels::gemm_parallel(a, b);
        CHECK((cs - cp).norm_fro() <= 1e-12 * cs.norm_fro());
    }
}

TEST_CASE("parallel gemm is deterministic across repeated runs") {
    std::mt19937_64 rng(13);
    ComplexMatrix a = random_mn(rng, 96, 96), b = random_mn(rng, 96, 96);
    ComplexMatrix c1 = kernels::gemm_parallel(a, b);
    ComplexMatrix c2 = kernels::gemm_parallel(a, b);
    CHECK((c1 - c2).norm_fro() == 0.0);
}

TEST_CASE("column-scaled product equals scale-then-multiply") {
    std::mt19937_64 rng(14);
    ComplexMatrix a = random_mn(rng, 9, 6), b = random_mn(rng, 6, 9);
    std::vector<cplx> d(6);
    std::normal_distribution<double> g;
    for (cplx& v : d) v = cplx(g(rng), g(rng));
    ComplexMatrix as = a;
    for (std::size_t i = 0; i < 9; ++i)
        for (std::size_t k = 0; k < 6; ++k) as(i, k) *= d[k];
    ComplexMatrix expect = kernels::gemm_serial(as, b);
    ComplexMatrix got = kernels::gemm_col_scaled(a, d, b);
    CHECK((expect - got).norm_fro() <= 1e-12 * expect.norm_fro());
}

TEST_CASE("matvec matches gemm on a single column") {
    std::mt19937_64 rng(15);
    ComplexMatrix a = random_mn(rng, 8, 8), x = random_mn(rng, 8, 1);
    CHECK((kernels::matvec(a, x) - kernels::gemm_serial(a, x)).norm_fro() <= 1e-13);
}
