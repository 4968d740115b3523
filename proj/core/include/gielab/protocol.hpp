#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "gielab/constants.hpp"
#include "gielab/matrix.hpp"

namespace gielab::protocol {

/// Masses in a double spatial superposition interacting gravitationally.
/// Geometry: each mass is split by dx along the line joining them; the branch
/// centers of the two masses are d apart.
struct BmvParams {
    double m1 = 0.0;   ///< kg
    double m2 = 0.0;   ///< kg
    double d = 0.0;    ///< branch-center separation, m
    double dx = 0.0;   ///< superposition splitting, m
    double tau = 0.0;  ///< interaction time, s
    PhysicalConstants constants;

    /// Positive fields and dx < d; throws DegeneracyError / ContractError.
    void validate() const;
};

/// Accumulated Newtonian phases per branch pair. The relative phases are
/// computed accessors so that dphi = phi_xy - phi holds exactly.
struct PathPhases {
    double phi = 0.0;     ///< LL and RR branches: G m1 m2 tau / (hbar d)
    double phi_lr = 0.0;  ///< LR branch: separation d + dx
    double phi_rl = 0.0;  ///< RL branch: separation d - dx

    double dphi_lr() const { return phi_lr - phi; }
    double dphi_rl() const { return phi_rl - phi; }
    /// The entanglement-generating combination dphi_lr + dphi_rl.
    double entangling_sum() const { return dphi_lr() + dphi_rl(); }
};

/// Exact evaluation of the three phase formulas (equality, not just the
/// order-of-magnitude reading; this keeps cross-module checks exact).
PathPhases compute_phases(const BmvParams& p);

/// Two-mass state after time tau, basis order |LL>, |LR>, |RL>, |RR>:
/// (e^{i phi}/2) [ |LL> + e^{i dphi_lr}|LR> + e^{i dphi_rl}|RL> + |RR> ].
std::vector<Complex> bipartite_state(const PathPhases& ph);

/// Controlled unitaries acting on a D-dimensional mediator, one per branch
/// of each mass, plus the mediator's ready state.
struct MediatorSpec {
    ComplexMatrix u_l, u_r;        ///< mass-1 branch controls
    ComplexMatrix v_l, v_r;        ///< mass-2 branch controls
    std::vector<Complex> gamma0;   ///< unit ready state

    std::size_t dim() const { return gamma0.size(); }
    /// Unitarity of all four controls to `tol` and unit norm of gamma0.
    void validate(double tol = 1e-9) const;

    static MediatorSpec trivial(std::size_t dim);
};

/// Per-branch-pair phases fed to the tripartite evolution. The mediator
/// controls carry the branch-state change; the scalar phases are supplied
/// here (zero() for a phase-free evolution).
struct BranchPhases {
    double ll = 0.0, lr = 0.0, rl = 0.0, rr = 0.0;

    static BranchPhases zero() { return {}; }
    static BranchPhases from_path_phases(const PathPhases& ph) {
        return {ph.phi, ph.phi_lr, ph.phi_rl, ph.phi};
    }
};

/// Order in which the two controlled couplings act when [U_X, V_Y] != 0.
enum class MediatorOrdering { UV, VU };

/// Joint matter-mediator ket after the interaction, dimension 2*2*D with
/// factor order (mass1, mass2, mediator):
///   sum_XY (1/2) e^{i phi_XY} |X>|Y> (x) U_X V_Y |gamma0>.
std::vector<Complex> tripartite_evolve(const MediatorSpec& ms, const BranchPhases& ph,
                                       MediatorOrdering ordering = MediatorOrdering::UV);

/// Matter-matter reduced density matrix of a tripartite ket.
ComplexMatrix matter_reduced_state(const std::vector<Complex>& tripartite_ket,
                                   std::size_t mediator_dim);

/// Cubic momentum lattice k = 2 pi n / box_length, |n_i| <= n_max, n != 0,
/// with omega_k = c|k|. Modes are enumerated procedurally; nothing is stored
/// per mode, so large cutoffs stay cheap.
class ModeGrid {
public:
    struct Mode {
        std::array<double, 3> k;  ///< wavevector, 1/m
        double k_mag;             ///< |k|, 1/m
        double omega;             ///< c|k|, 1/s
    };

    ModeGrid(double box_length, int n_max, const PhysicalConstants& constants);

    double box_length() const { return box_length_; }
    int n_max() const { return n_max_; }
    double volume() const { return box_length_ * box_length_ * box_length_; }
    const PhysicalConstants& constants() const { return constants_; }
    std::size_t mode_count() const;

    Mode mode(int n1, int n2, int n3) const;

    /// Visit every lattice mode once (zero mode excluded).
    void for_each_mode(const std::function<void(const Mode&)>& visit) const;

    /// Explicit mode list for small cutoffs (reporting, tests).
    std::vector<Mode> materialize(std::size_t max_modes = 2'000'000) const;

private:
    double box_length_;
    int n_max_;
    PhysicalConstants constants_;
};

/// Matter-graviton coupling g = m c^2 sqrt(2 pi G / (hbar c^3 k V)), 1/s.
double coupling(const ModeGrid& grid, double mass, const ModeGrid::Mode& mode);

/// Ground-state interaction energy of the displaced-oscillator model,
///   -sum_k 2 hbar g1 g2 cos(k . r12) / omega_k   (separation along x),
/// which approaches -G m1 m2 / separation under joint (box, cutoff)
/// refinement. `smoothing_length` a > 0 applies the standard Gaussian mode
/// window exp(-(k a)^2/4) (the k-space side of an Ewald split, equivalently
/// sources smeared to erf(r/a)/r); a sharp cutoff (a = 0) leaves percent-level
/// truncation ringing, so converged figures should be quoted with a > 0.
/// Throws ContractError when |separation| >= box/2 (image contamination).
double mode_sum_potential(const ModeGrid& grid, const BmvParams& p, double separation,
                          double smoothing_length = 0.0);

/// Branch-center positions along the axis joining the masses.
struct BranchGeometry {
    double r1_l = 0.0, r1_r = 0.0;  ///< mass-1 branch positions, m
    double r2_l = 0.0, r2_r = 0.0;  ///< mass-2 branch positions, m

    /// Standard layout: mass 1 at {0, dx}, mass 2 at {d, d + dx}, so the
    /// four branch-pair separations are d, d+dx, d-dx, d.
    static BranchGeometry standard(const BmvParams& p) {
        return {0.0, p.dx, p.d, p.d + p.dx};
    }
    double separation(bool x_right, bool y_right) const {
        return (y_right ? r2_r : r2_l) - (x_right ? r1_r : r1_l);
    }
};

struct FieldPhaseResult {
    double dphi_lr_eff = 0.0;      ///< relative to the mean of the LL/RR phases
    double dphi_rl_eff = 0.0;
    double max_displacement = 0.0; ///< max over modes and masses of g/omega
    double entangling_sum() const { return dphi_lr_eff + dphi_rl_eff; }
};

/// Mode-summed effective entangling phases (interaction energy x tau/hbar per
/// branch pair; single-mass self-energies cancel in the differences) plus the
/// worst per-mode coherent displacement |alpha| = g/omega, which bounds the
/// which-path leakage left in the field.
FieldPhaseResult field_phase_and_leakage(const ModeGrid& grid, const BmvParams& p,
                                         const BranchGeometry& geom,
                                         double smoothing_length = 0.0);

}  // namespace gielab::protocol
