#include "gielab/entwit.hpp"

#include <algorithm>
#include <cmath>

#include "gielab/constants.hpp"
#include "gielab/errors.hpp"
#include "gielab/qmat.hpp"

namespace gielab::entwit {

void Bipartition::validate(std::size_t total_dim) const {
    std::size_t prod = 1;
    for (std::size_t d : dims) {
        if (d == 0) throw DimensionError("Bipartition: zero factor dimension");
        prod *= d;
    }
    if (prod != total_dim) {
        throw DimensionError("Bipartition: factor dims do not multiply to the state dim");
    }
    if (side_a.empty() || side_a.size() >= dims.size()) {
        throw ContractError("Bipartition: side A must be a nonempty proper subset");
    }
    for (std::size_t f : side_a) {
        if (f >= dims.size()) throw DimensionError("Bipartition: side A index out of range");
    }
}

void require_density(const ComplexMatrix& rho, const DensityTolerances& tol) {
    if (rho.hermiticity_defect() > tol.hermiticity) {
        throw ContractError("density matrix check: not Hermitian within tolerance");
    }
    if (std::abs(rho.trace().real() - 1.0) > tol.trace || std::abs(rho.trace().imag()) > tol.trace) {
        throw ContractError("density matrix check: trace != 1 within tolerance");
    }
    const auto spec = herm_eig(rho, tol.hermiticity);
    if (spec.eigenvalues.back() < -tol.psd) {
        throw ContractError("density matrix check: negative eigenvalue beyond tolerance");
    }
}

double negativity(const ComplexMatrix& rho, const Bipartition& cut, const DensityTolerances& tol) {
    cut.validate(rho.dim());
    require_density(rho, tol);
    const ComplexMatrix pt = partial_transpose(rho, cut.dims, cut.side_a);
    const double neg = 0.5 * (trace_norm(pt) - 1.0);
    return std::max(neg, 0.0);
}

bool phase_entanglement_criterion(const protocol::PathPhases& ph, double tol) {
    const double sum = ph.entangling_sum();
    const double two_pi = 2.0 * kPi;
    const double wrapped = sum - two_pi * std::round(sum / two_pi);
    return std::abs(wrapped) > tol;
}

}  // namespace gielab::entwit
