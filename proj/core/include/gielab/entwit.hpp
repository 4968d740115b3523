#pragma once

#include <cstddef>
#include <vector>

#include "gielab/matrix.hpp"
#include "gielab/protocol.hpp"

namespace gielab::entwit {

/// A cut of a multi-factor space: factor dimensions plus the set of factor
/// indices forming side A.
struct Bipartition {
    std::vector<std::size_t> dims;
    std::vector<std::size_t> side_a;  ///< nonempty proper subset of factor indices

    void validate(std::size_t total_dim) const;

    static Bipartition two_qubits() { return {{2, 2}, {0}}; }
    static Bipartition matter_vs_matter(std::size_t mediator_dim) {
        // (mass1 | mass2 x mediator)
        return {{2, 2, mediator_dim}, {0}};
    }
};

/// Tolerances for accepting rho as a density matrix.
struct DensityTolerances {
    double hermiticity = 1e-10;
    double psd = 1e-10;    ///< eigenvalues may dip to -psd
    double trace = 1e-10;  ///< |tr rho - 1|
};

/// Throws ContractError if rho is not a density matrix within tolerances.
void require_density(const ComplexMatrix& rho, const DensityTolerances& tol = {});

/// Negativity (||rho^{T_A}||_1 - 1)/2: zero on product states, 1/2 on a Bell
/// pair. Computed via the partial transpose over side A of the cut.
double negativity(const ComplexMatrix& rho, const Bipartition& cut,
                  const DensityTolerances& tol = {});

/// True iff dphi_lr + dphi_rl is farther than `tol` radians from every
/// multiple of 2 pi — the phase-level entanglement criterion for the
/// bipartite protocol state.
bool phase_entanglement_criterion(const protocol::PathPhases& ph, double tol);

}  // namespace gielab::entwit
