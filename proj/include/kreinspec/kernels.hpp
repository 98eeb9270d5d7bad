#ifndef KREINSPEC_KERNELS_HPP
#define KREINSPEC_KERNELS_HPP

#include <cstddef>

#include "kreinspec/complex_matrix.hpp"

// Data-parallel kernels. Each has a serial reference implementation and an
// OpenMP variant; gemm() dispatches on size. The two variants are compared
// in tests and in the benchmark target. Outputs are bitwise deterministic:
// every output element is written by exactly one thread, no reductions.
namespace kreinspec::kernels {

// C = A·B, straightforward triple loop. Reference implementation.
ComplexMatrix gemm_serial(const ComplexMatrix& a, const ComplexMatrix& b);

// C = A·B, split into four real planes and blocked, OpenMP over row blocks.
ComplexMatrix gemm_parallel(const ComplexMatrix& a, const ComplexMatrix& b);

// Dispatch: parallel kernel above the cutoff, serial below.
ComplexMatrix gemm(const ComplexMatrix& a, const ComplexMatrix& b);

// C = A·diag(d)·B with d applied to A's columns; one fused pass, same
// dispatch rule as gemm. Used to materialize spectral projectors.
ComplexMatrix gemm_col_scaled(const ComplexMatrix& a, const std::vector<cplx>& d,
                              const ComplexMatrix& b);

// y = M·x for a single vector (n×1), serial.
ComplexMatrix matvec(const ComplexMatrix& m, const ComplexMatrix& x);

// Size cutoff (in rows of the output) above which gemm() goes parallel.
std::size_t parallel_cutoff();

}  // namespace kreinspec::kernels

#endif
