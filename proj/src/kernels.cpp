#include "kreinspec/kernels.hpp"

#include <vector>

#include "kreinspec/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kreinspec::kernels {

namespace {

constexpr std::size_t kCutoff = 48;
constexpr std::size_t kBlock = 64;

// Split M into contiguous real and imaginary planes (row-major).
void split(const ComplexMatrix& m, std::vector<double>& re, std::vector<double>& im) {
    const std::size_t nm = m.rows() * m.cols();
    re.resize(nm);
    im.resize(nm);
    const cplx* p = m.data();
    for (std::size_t i = 0; i < nm; ++i) {
        re[i] = p[i].real();
        im[i] = p[i].imag();
    }
}

// cr += ar*br - ai*bi ; ci += ar*bi + ai*br over one row block.
// Plain real arithmetic so the compiler can vectorize the j loop.
void block_rows(std::size_t i0, std::size_t i1, std::size_t k_dim, std::size_t n,
                const double* ar, const double* ai, const double* br, const double* bi,
                double* cr, double* ci) {
    for (std::size_t i = i0; i < i1; ++i) {
        double* __restrict crow = cr + i * n;
        double* __restrict cirow = ci + i * n;
        for (std::size_t k = 0; k < k_dim; ++k) {
            const double arv = ar[i * k_dim + k];
            const double aiv = ai[i * k_dim + k];
            const double* __restrict brow = br + k * n;
            const double* __restrict birow = bi + k * n;
            for (std::size_t j = 0; j < n; ++j) {
                crow[j] += arv * brow[j] - aiv * birow[j];
                cirow[j] += arv * birow[j] + aiv * brow[j];
            }
        }
    }
}

}  // namespace

std::size_t parallel_cutoff() { return kCutoff; }

ComplexMatrix gemm_serial(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionError("gemm shape mismatch");
    const std::size_t m = a.rows(), k_dim = a.cols(), n = b.cols();
    ComplexMatrix c(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < k_dim; ++k) {
            const cplx av = a(i, k);
            if (av == cplx(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < n; ++j) c(i, j) += av * b(k, j);
        }
    return c;
}

ComplexMatrix gemm_parallel(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionError("gemm shape mismatch");
    const std::size_t m = a.rows(), k_dim = a.cols(), n = b.cols();
    std::vector<double> ar, ai, br, bi;
    split(a, ar, ai);
    split(b, br, bi);
    std::vector<double> cr(m * n, 0.0), ci(m * n, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::size_t i0 = 0; i0 < m; i0 += kBlock) {
        const std::size_t i1 = std::min(m, i0 + kBlock);
        block_rows(i0, i1, k_dim, n, ar.data(), ai.data(), br.data(), bi.data(), cr.data(),
                   ci.data());
    }
    ComplexMatrix c(m, n);
    cplx* p = c.data();
    for (std::size_t i = 0; i < m * n; ++i) p[i] = cplx(cr[i], ci[i]);
    return c;
}

ComplexMatrix gemm(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() >= kCutoff || b.cols() >= kCutoff || a.cols() >= kCutoff)
        return gemm_parallel(a, b);
    return gemm_serial(a, b);
}

ComplexMatrix gemm_col_scaled(const ComplexMatrix& a, const std::vector<cplx>& d,
                              const ComplexMatrix& b) {
    if (a.cols() != d.size() || a.cols() != b.rows())
        throw DimensionError("gemm_col_scaled shape mismatch");
    ComplexMatrix as(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) as(i, k) = a(i, k) * d[k];
    return gemm(as, b);
}

ComplexMatrix matvec(const ComplexMatrix& m, const ComplexMatrix& x) {
    if (m.cols() != x.rows() || x.cols() != 1) throw DimensionError("matvec shape mismatch");
    ComplexMatrix y(m.rows(), 1);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        cplx s = 0.0;
        for (std::size_t k = 0; k < m.cols(); ++k) s += m(i, k) * x(k, 0);
        y(i, 0) = s;
    }
    return y;
}

}  // namespace kreinspec::kernels
