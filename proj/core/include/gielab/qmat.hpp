#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gielab/matrix.hpp"

namespace gielab {

/// Largest ambient dimension any tensor operation may produce. Protocol
/// models stay well below this; the guard catches accidental blowups.
inline constexpr std::size_t kMaxAmbientDim = 4096;

/// Eigendecomposition of a Hermitian matrix: M = U diag(eigenvalues) U†.
struct HermitianSpectrum {
    std::vector<double> eigenvalues;  ///< sorted descending
    ComplexMatrix eigenvectors;       ///< unitary; column j pairs with eigenvalues[j]
};

/// Tensor (Kronecker) product. Output dim = dim(a)*dim(b), (i,j) block is a_ij*b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b,
                   std::size_t max_dim = kMaxAmbientDim);

/// Trace out the tensor factors not listed in `keep`. `dims` are the factor
/// dimensions (row-major order, product must equal dim(m)); `keep` holds
/// ascending factor indices to retain.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep);

/// Transpose the tensor factors listed in `transposed`, leave the rest alone.
ComplexMatrix partial_transpose(const ComplexMatrix& m, std::span<const std::size_t> dims,
                                std::span<const std::size_t> transposed);

/// Full eigendecomposition by cyclic complex Jacobi rotations. Self-contained
/// (no external solver); accurate to ~1e-14 relative for dims <= 64.
/// Throws ContractError if the input fails Hermiticity at `herm_tol`.
HermitianSpectrum herm_eig(const ComplexMatrix& m, double herm_tol = 1e-10);

/// exp(scale*h) for Hermitian h via eigendecomposition. Unitary when `scale`
/// is purely imaginary.
ComplexMatrix herm_exp(const ComplexMatrix& h, Complex scale, double herm_tol = 1e-10);

/// Spectral radius max|eigenvalue| (Hermitian input required).
double op_norm(const ComplexMatrix& m, double herm_tol = 1e-10);

/// Sum of singular values. Hermitian inputs take the exact sum-|eigenvalue|
/// route; general inputs go through the eigenvalues of M†M.
double trace_norm(const ComplexMatrix& m);

}  // namespace gielab
