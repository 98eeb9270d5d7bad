#ifndef KREINSPEC_SAMPLING_HPP
#define KREINSPEC_SAMPLING_HPP

#include <cstdint>
#include <random>

#include "kreinspec/krein.hpp"

// Deterministic random instances for the property suites and the selftest
// command. Each instance derives its own stream from (seed, index), so batch
// results are independent of evaluation order.
namespace kreinspec::sampling {

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t index);

ComplexMatrix random_matrix(std::mt19937_64& rng, std::size_t n);
ComplexMatrix random_hermitian(std::mt19937_64& rng, std::size_t n);
ComplexMatrix random_psd(std::mt19937_64& rng, std::size_t n);
// Hermitian with min |eigenvalue| ≥ margin·max |eigenvalue| (resampled).
ComplexMatrix random_invertible_hermitian(std::mt19937_64& rng, std::size_t n,
                                          double margin = 0.05);
ComplexMatrix random_unit_vector(std::mt19937_64& rng, std::size_t n);

struct RandomPair {
    OperatorPair pair;
    std::size_t n;
};
// A, G Hermitian; G invertible when require_invertible_g.
RandomPair random_pair(std::mt19937_64& rng, std::size_t max_n, bool require_invertible_g);

}  // namespace kreinspec::sampling

#endif
