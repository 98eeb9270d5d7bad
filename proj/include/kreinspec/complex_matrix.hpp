#ifndef KREINSPEC_COMPLEX_MATRIX_HPP
#define KREINSPEC_COMPLEX_MATRIX_HPP

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace kreinspec {

using cplx = std::complex<double>;

// Dense row-major complex matrix. Value type; all operations produce fresh
// matrices. Entries are expected finite (no NaN/Inf); is_finite() checks.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, cplx(0.0, 0.0)) {}

    // Row-major nested initializer, e.g. {{1, 2}, {3, 4}}.
    ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(const std::vector<cplx>& d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }
    bool square() const { return rows_ == cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    cplx* data() { return data_.data(); }
    const cplx* data() const { return data_.data(); }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conjugate() const;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(cplx s);

    ComplexMatrix col(std::size_t j) const;
    // Columns [first, last) as an n×(last−first) block.
    ComplexMatrix cols_range(std::size_t first, std::size_t last) const;
    void set_col(std::size_t j, const ComplexMatrix& v);
    ComplexMatrix submatrix(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    // Horizontal concatenation [*this | right].
    ComplexMatrix hcat(const ComplexMatrix& right) const;

    double norm_fro() const;
    double norm_max() const;  // max |entry|
    double norm_one() const;  // max column sum of |entry|
    cplx trace() const;
    bool is_finite() const;
    // ‖M − M*‖_F (0 for exactly Hermitian data).
    double hermiticity_defect() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, ComplexMatrix a);
ComplexMatrix operator*(ComplexMatrix a, cplx s);
// Matrix product; dispatches to the kernel layer (OpenMP above a size cutoff).
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

// (u,v) = Σ u_i conj(v_i): the Hilbert inner product, linear in the first slot.
cplx inner(const ComplexMatrix& u, const ComplexMatrix& v);
double vec_norm(const ComplexMatrix& v);

// (M + M*)/2.
ComplexMatrix hermitian_part(const ComplexMatrix& m);

}  // namespace kreinspec

#endif
