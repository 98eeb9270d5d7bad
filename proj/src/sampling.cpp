#include "kreinspec/sampling.hpp"

#include <cmath>

#include "kreinspec/errors.hpp"

namespace kreinspec::sampling {

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed ^ (0x9e3779b97f4a7c15ull * (index + 1));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return std::mt19937_64(z ^ (z >> 31));
}

ComplexMatrix random_matrix(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> g;
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = cplx(g(rng), g(rng));
    return m;
}

ComplexMatrix random_hermitian(std::mt19937_64& rng, std::size_t n) {
    return hermitian_part(random_matrix(rng, n));
}

ComplexMatrix random_psd(std::mt19937_64& rng, std::size_t n) {
    ComplexMatrix c = random_matrix(rng, n);
    return c.adjoint() * c;
}

ComplexMatrix random_invertible_hermitian(std::mt19937_64& rng, std::size_t n, double margin) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        ComplexMatrix m = random_hermitian(rng, n);
        HermitianEig e = hermitian_eig(m);
        double mn = std::numeric_limits<double>::infinity(), mx = 0.0;
        for (double ev : e.values) {
            mn = std::min(mn, std::abs(ev));
            mx = std::max(mx, std::abs(ev));
        }
        if (mn >= margin * mx) return m;
    }
    throw Error("random_invertible_hermitian: resampling failed");
}

ComplexMatrix random_unit_vector(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> g;
    ComplexMatrix v(n, 1);
    for (std::size_t i = 0; i < n; ++i) v(i, 0) = cplx(g(rng), g(rng));
    const double nv = vec_norm(v);
    for (std::size_t i = 0; i < n; ++i) v(i, 0) /= nv;
    return v;
}

RandomPair random_pair(std::mt19937_64& rng, std::size_t max_n, bool require_invertible_g) {
    std::uniform_int_distribution<std::size_t> pick(2, max_n);
    const std::size_t n = pick(rng);
    ComplexMatrix a = random_hermitian(rng, n);
    ComplexMatrix g = require_invertible_g ? random_invertible_hermitian(rng, n)
                                           : random_hermitian(rng, n);
    return {OperatorPair::create(std::move(a), std::move(g)), n};
}

}  // namespace kreinspec::sampling
