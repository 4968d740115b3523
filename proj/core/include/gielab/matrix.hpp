#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace gielab {

using Complex = std::complex<double>;

/// Dense square complex matrix, row-major storage. The single carrier type
/// for states, observables, projections, unitaries and channels.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {}
    ComplexMatrix(std::size_t dim, std::vector<Complex> entries);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix diagonal(std::span<const Complex> diag);
    static ComplexMatrix diagonal(std::span<const double> diag);
    static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);
    /// |ket><bra|
    static ComplexMatrix outer(std::span<const Complex> ket, std::span<const Complex> bra);

    std::size_t dim() const { return dim_; }
    bool empty() const { return dim_ == 0; }

    Complex& operator()(std::size_t i, std::size_t j) { return entries_[i * dim_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }
    std::span<const Complex> entries() const { return entries_; }

    ComplexMatrix& operator+=(const ComplexMatrix& rhs);
    ComplexMatrix& operator-=(const ComplexMatrix& rhs);
    ComplexMatrix& operator*=(Complex scale);

    friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
    friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
    friend ComplexMatrix operator*(Complex scale, ComplexMatrix m) { return m *= scale; }
    friend ComplexMatrix operator*(ComplexMatrix m, Complex scale) { return m *= scale; }
    friend ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);

    /// Matrix-vector product.
    std::vector<Complex> apply(std::span<const Complex> v) const;

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conjugate() const;

    Complex trace() const;
    double frobenius_norm() const;
    double max_abs() const;
    /// max_ij |M_ij - conj(M_ji)|
    double hermiticity_defect() const;
    bool is_hermitian(double tol = 1e-12) const { return hermiticity_defect() <= tol; }

private:
    std::size_t dim_ = 0;
    std::vector<Complex> entries_;
};

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
/// (ab + ba)/2, self-adjoint whenever a and b are.
ComplexMatrix jordan_product(const ComplexMatrix& a, const ComplexMatrix& b);

// Ket helpers. States are plain complex vectors.
double vec_norm(std::span<const Complex> v);
/// <a|b>, conjugate-linear in the first argument.
Complex vec_dot(std::span<const Complex> a, std::span<const Complex> b);
std::vector<Complex> kron_vec(std::span<const Complex> a, std::span<const Complex> b);
/// |ket><ket|
ComplexMatrix density(std::span<const Complex> ket);
void normalize(std::vector<Complex>& v);

}  // namespace gielab
