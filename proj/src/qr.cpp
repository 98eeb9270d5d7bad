#include <cmath>
#include <numeric>

#include "kreinspec/dense_linalg.hpp"
#include "kreinspec/errors.hpp"

namespace kreinspec {

PivotedQr qr_col_pivot(const ComplexMatrix& a, double drop_tol) {
    const std::size_t n = a.rows(), m = a.cols();
    PivotedQr out;
    out.r = a;
    out.q = ComplexMatrix::identity(n);
    out.perm.resize(m);
    std::iota(out.perm.begin(), out.perm.end(), 0);
    ComplexMatrix& r = out.r;
    ComplexMatrix& q = out.q;
    const std::size_t steps = std::min(n, m);
    out.rank = 0;
    for (std::size_t k = 0; k < steps; ++k) {
        // pivot: largest remaining column norm (recomputed; sizes are small)
        std::size_t best = k;
        double bestn = -1.0;
        for (std::size_t j = k; j < m; ++j) {
            double s = 0.0;
            for (std::size_t i = k; i < n; ++i) s += std::norm(r(i, j));
            if (s > bestn) {
                bestn = s;
                best = j;
            }
        }
        if (best != k) {
            for (std::size_t i = 0; i < n; ++i) std::swap(r(i, k), r(i, best));
            std::swap(out.perm[k], out.perm[best]);
        }
        const double colnorm = std::sqrt(std::max(bestn, 0.0));
        if (colnorm <= drop_tol) break;
        out.rank = static_cast<int>(k) + 1;

        const std::size_t len = n - k;
        const cplx x0 = r(k, k);
        const double ax0 = std::abs(x0);
        const cplx phase = ax0 > 0 ? x0 / ax0 : cplx(1.0, 0.0);
        const cplx alpha = -phase * colnorm;
        std::vector<cplx> v(len);
        for (std::size_t i = 0; i < len; ++i) v[i] = r(k + i, k);
        v[0] -= alpha;
        double vn2 = 0.0;
        for (const cplx& vi : v) vn2 += std::norm(vi);
        if (vn2 > 0.0) {
            const double vninv = 1.0 / std::sqrt(vn2);
            for (cplx& vi : v) vi *= vninv;
            for (std::size_t j = k; j < m; ++j) {
                cplx vc = 0.0;
                for (std::size_t i = 0; i < len; ++i) vc += std::conj(v[i]) * r(k + i, j);
                vc *= 2.0;
                for (std::size_t i = 0; i < len; ++i) r(k + i, j) -= vc * v[i];
            }
            for (std::size_t rr = 0; rr < n; ++rr) {
                cplx rv = 0.0;
                for (std::size_t i = 0; i < len; ++i) rv += q(rr, k + i) * v[i];
                rv *= 2.0;
                for (std::size_t i = 0; i < len; ++i) q(rr, k + i) -= rv * std::conj(v[i]);
            }
        }
        r(k, k) = alpha;
        for (std::size_t i = k + 1; i < n; ++i) r(i, k) = 0.0;
    }
    return out;
}

ComplexMatrix orthonormal_range(const ComplexMatrix& a, int rank) {
    if (rank <= 0) return ComplexMatrix(a.rows(), 0);
    PivotedQr qr = qr_col_pivot(a, 0.0);
    if (qr.rank < rank)
        throw Error("orthonormal_range: numerical rank " + std::to_string(qr.rank) +
                    " below requested " + std::to_string(rank));
    return qr.q.cols_range(0, static_cast<std::size_t>(rank));
}

ComplexMatrix null_space_basis(const ComplexMatrix& a, double drop_tol) {
    const std::size_t n = a.cols();
    PivotedQr qr = qr_col_pivot(a.adjoint(), drop_tol);
    return qr.q.cols_range(static_cast<std::size_t>(qr.rank), n);
}

}  // namespace kreinspec
