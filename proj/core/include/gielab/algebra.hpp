#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gielab/matrix.hpp"
#include "gielab/rng.hpp"

namespace gielab::algebra {

/// A finite-dimensional *-algebra of operators, given by generators on an
/// ambient space, optionally carrying a Frobenius-orthonormal basis of the
/// generated von Neumann algebra.
struct AlgebraSpec {
    std::size_t ambient_dim = 0;
    std::vector<ComplexMatrix> generators;
    std::optional<std::vector<ComplexMatrix>> closed_basis;

    static AlgebraSpec from_generators(std::size_t ambient_dim,
                                       std::vector<ComplexMatrix> generators);

    std::size_t algebra_dim() const;  ///< basis size; throws if not closed
    const std::vector<ComplexMatrix>& basis() const;
    /// Generator shapes, basis orthonormality and closure (products and
    /// adjoints re-expand in the basis to 1e-9).
    void validate() const;
};

/// ||x - P_span(x)||_F for a Frobenius-orthonormal basis.
double membership_residual(const ComplexMatrix& x, std::span<const ComplexMatrix> basis);

/// Worst membership residual of basis products and adjoints.
double closure_residual(std::span<const ComplexMatrix> basis);

/// Sine of the largest principal angle from span(a) into span(b). Computed
/// from residual norms, so it stays accurate for nearly-equal subspaces
/// (where the cosine route would round to zero angle).
double max_principal_angle_sin(std::span<const ComplexMatrix> a, std::span<const ComplexMatrix> b);

/// Equal dimension and both directed angles below tol.
bool subspaces_equal(std::span<const ComplexMatrix> a, std::span<const ComplexMatrix> b,
                     double tol = 1e-8);

/// Commutant {X : [X, G] = 0 for all generators G and their adjoints},
/// returned with an orthonormal closed basis (null space of the stacked
/// commutator maps). Always unital and *-closed.
AlgebraSpec commutant(const AlgebraSpec& a);

/// Smallest von Neumann algebra containing the generators, via the double
/// commutant. Keeps the original generators, fills in closed_basis.
AlgebraSpec generated_algebra(const AlgebraSpec& a);

struct CenterResult {
    std::vector<ComplexMatrix> center_basis;
    bool is_factor = false;  ///< center is scalars only
};

/// Center = algebra ∩ commutant, from the joint null space of the in-algebra
/// commutator maps. Requires closed_basis.
CenterResult center_and_factor(const AlgebraSpec& a);

struct CommuteReport {
    bool commute = false;
    double max_residual = 0.0;  ///< worst ||[G, H]||_F over generator pairs
};

CommuteReport commute_check(const AlgebraSpec& a1, const AlgebraSpec& a2, double tol = 1e-10);

/// Orthogonal projection onto range(e) ∩ range(f): the eigenvalue-1 spectral
/// cut of (e + f)/2. Inputs must be orthogonal projections to 1e-10.
ComplexMatrix projection_meet(const ComplexMatrix& e, const ComplexMatrix& f, double tol = 1e-8);

struct UncorrelatedReport {
    bool uncorrelated = false;
    double worst_deviation = 0.0;
    std::size_t samples = 0;
};

/// Samples spectral projections E, F of random Hermitian elements of the two
/// algebras and reports the worst |tr(rho (E^F)) - tr(rho E) tr(rho F)|.
/// A product state over tensor-split algebras passes; any correlated state
/// shows an O(1) deviation.
UncorrelatedReport uncorrelated_check(const ComplexMatrix& rho, const AlgebraSpec& a1,
                                      const AlgebraSpec& a2, std::size_t samples,
                                      std::uint64_t seed);

/// Random Hermitian element of a closed algebra (Gaussian coefficients over
/// the basis, Hermitian part taken; stays inside by *-closure).
ComplexMatrix random_hermitian_element(Rng& rng, const AlgebraSpec& a);

/// Spectral projections of a Hermitian matrix, one per eigenvalue cluster
/// (descending eigenvalue order, gaps below cluster_tol merged).
std::vector<ComplexMatrix> spectral_projections(const ComplexMatrix& herm,
                                                double cluster_tol = 1e-8);

// Canned ambient-space generator sets used across tests and the CLI.
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

/// B(C^{d_left}) (x) I_{d_right} embedded generators (left factor full).
AlgebraSpec left_factor_algebra(std::size_t d_left, std::size_t d_right);
/// I_{d_left} (x) B(C^{d_right}) embedded generators.
AlgebraSpec right_factor_algebra(std::size_t d_left, std::size_t d_right);

}  // namespace gielab::algebra
