#include "gielab/protocol.hpp"

#include <cmath>
#include <string>

#include "gielab/errors.hpp"
#include "gielab/qmat.hpp"

namespace gielab::protocol {

void BmvParams::validate() const {
    if (!(m1 > 0.0) || !(m2 > 0.0) || !(d > 0.0) || !(dx > 0.0) || !(tau > 0.0)) {
        throw ContractError("BmvParams: all of m1, m2, d, dx, tau must be strictly positive");
    }
    if (dx >= d) {
        throw DegeneracyError("BmvParams: dx >= d degenerates the d - dx branch separation");
    }
}

PathPhases compute_phases(const BmvParams& p) {
    p.validate();
    const double base = p.constants.G * p.m1 * p.m2 * p.tau / p.constants.hbar;
    PathPhases ph;
    ph.phi = base / p.d;
    ph.phi_lr = base / (p.d + p.dx);
    ph.phi_rl = base / (p.d - p.dx);
    return ph;
}

std::vector<Complex> bipartite_state(const PathPhases& ph) {
    const Complex common = 0.5 * std::polar(1.0, ph.phi);
    return {common, common * std::polar(1.0, ph.dphi_lr()), common * std::polar(1.0, ph.dphi_rl()),
            common};
}

void MediatorSpec::validate(double tol) const {
    const std::size_t n = dim();
    if (n == 0) throw ContractError("MediatorSpec: empty mediator");
    for (const ComplexMatrix* m : {&u_l, &u_r, &v_l, &v_r}) {
        if (m->dim() != n) throw DimensionError("MediatorSpec: control/mediator dim mismatch");
        ComplexMatrix gram = m->adjoint() * (*m);
        gram -= ComplexMatrix::identity(n);
        if (gram.frobenius_norm() > tol) {
            throw ContractError("MediatorSpec: control matrix is not unitary within tolerance");
        }
    }
    if (std::abs(vec_norm(gamma0) - 1.0) > 1e-12) {
        throw ContractError("MediatorSpec: gamma0 must be a unit vector");
    }
}

MediatorSpec MediatorSpec::trivial(std::size_t dim) {
    MediatorSpec ms;
    ms.u_l = ms.u_r = ms.v_l = ms.v_r = ComplexMatrix::identity(dim);
    ms.gamma0.assign(dim, Complex(0.0));
    ms.gamma0[0] = 1.0;
    return ms;
}

std::vector<Complex> tripartite_evolve(const MediatorSpec& ms, const BranchPhases& ph,
                                       MediatorOrdering ordering) {
    ms.validate();
    const std::size_t d = ms.dim();
    std::vector<Complex> out(4 * d);
    const double phase[2][2] = {{ph.ll, ph.lr}, {ph.rl, ph.rr}};
    for (int x = 0; x < 2; ++x) {
        const ComplexMatrix& u = (x == 0) ? ms.u_l : ms.u_r;
        for (int y = 0; y < 2; ++y) {
            const ComplexMatrix& v = (y == 0) ? ms.v_l : ms.v_r;
            std::vector<Complex> gamma = (ordering == MediatorOrdering::UV)
                                             ? u.apply(v.apply(ms.gamma0))
                                             : v.apply(u.apply(ms.gamma0));
            const Complex amp = 0.5 * std::polar(1.0, phase[x][y]);
            for (std::size_t g = 0; g < d; ++g) {
                out[(static_cast<std::size_t>(2 * x + y)) * d + g] = amp * gamma[g];
            }
        }
    }
    return out;
}

ComplexMatrix matter_reduced_state(const std::vector<Complex>& tripartite_ket,
                                   std::size_t mediator_dim) {
    if (mediator_dim == 0 || tripartite_ket.size() != 4 * mediator_dim) {
        throw DimensionError("matter_reduced_state: ket is not 2*2*D");
    }
    const std::size_t dims[] = {2, 2, mediator_dim};
    const std::size_t keep[] = {0, 1};
    return partial_trace(density(tripartite_ket), dims, keep);
}

ModeGrid::ModeGrid(double box_length, int n_max, const PhysicalConstants& constants)
    : box_length_(box_length), n_max_(n_max), constants_(constants) {
    if (!(box_length > 0.0)) throw ContractError("ModeGrid: box_length must be positive");
    if (n_max < 1) throw ContractError("ModeGrid: n_max must be at least 1 (empty grid)");
}

std::size_t ModeGrid::mode_count() const {
    const std::size_t per_axis = 2 * static_cast<std::size_t>(n_max_) + 1;
    return per_axis * per_axis * per_axis - 1;
}

ModeGrid::Mode ModeGrid::mode(int n1, int n2, int n3) const {
    if (n1 == 0 && n2 == 0 && n3 == 0) {
        throw ContractError("ModeGrid::mode: the zero mode is excluded");
    }
    if (std::abs(n1) > n_max_ || std::abs(n2) > n_max_ || std::abs(n3) > n_max_) {
        throw DimensionError("ModeGrid::mode: lattice index beyond cutoff");
    }
    const double beta = 2.0 * kPi / box_length_;
    Mode m;
    m.k = {beta * n1, beta * n2, beta * n3};
    m.k_mag = beta * std::sqrt(static_cast<double>(n1) * n1 + static_cast<double>(n2) * n2 +
                               static_cast<double>(n3) * n3);
    m.omega = constants_.c * m.k_mag;
    return m;
}

void ModeGrid::for_each_mode(const std::function<void(const Mode&)>& visit) const {
    for (int n1 = -n_max_; n1 <= n_max_; ++n1) {
        for (int n2 = -n_max_; n2 <= n_max_; ++n2) {
            for (int n3 = -n_max_; n3 <= n_max_; ++n3) {
                if (n1 == 0 && n2 == 0 && n3 == 0) continue;
                visit(mode(n1, n2, n3));
            }
        }
    }
}

std::vector<ModeGrid::Mode> ModeGrid::materialize(std::size_t max_modes) const {
    if (mode_count() > max_modes) {
        throw DimensionError("ModeGrid::materialize: grid too large to materialize");
    }
    std::vector<Mode> out;
    out.reserve(mode_count());
    for_each_mode([&](const Mode& m) { out.push_back(m); });
    return out;
}

double coupling(const ModeGrid& grid, double mass, const ModeGrid::Mode& mode) {
    if (!(mass > 0.0)) throw ContractError("coupling: mass must be positive");
    const PhysicalConstants& pc = grid.constants();
    const double c2 = pc.c * pc.c;
    return mass * c2 *
           std::sqrt(2.0 * kPi * pc.G / (pc.hbar * c2 * pc.c * mode.k_mag * grid.volume()));
}

namespace {

// Shared kernel: S(sep) = sum_{n != 0} w(n^2) cos(beta n_x sep) / n^2 with
// w the Gaussian window, evaluated for several separations in one lattice
// pass. The per-|n|^2 factor is tabulated once; octant symmetry cuts the
// loop count by 8.
std::vector<double> lattice_cosine_sums(const ModeGrid& grid, double smoothing_length,
                                        std::span<const double> separations) {
    const int n_max = grid.n_max();
    const double beta = 2.0 * kPi / grid.box_length();
    const std::size_t table_size = 3 * static_cast<std::size_t>(n_max) * n_max + 1;

    // exp(-(k a)^2 / 4) / n^2 indexed by n^2; the 1/k^2 scaling is applied
    // by the caller through beta^2
    const double wexp = 0.25 * beta * beta * smoothing_length * smoothing_length;
    std::vector<double> table(table_size, 0.0);
    for (std::size_t s = 1; s < table_size; ++s) {
        const double n2 = static_cast<double>(s);
        table[s] = (smoothing_length > 0.0 ? std::exp(-wexp * n2) : 1.0) / n2;
    }

    std::vector<std::vector<double>> cosx(separations.size(), std::vector<double>(n_max + 1));
    for (std::size_t q = 0; q < separations.size(); ++q) {
        for (int nx = 0; nx <= n_max; ++nx) {
            cosx[q][nx] = std::cos(beta * nx * separations[q]);
        }
    }

    std::vector<double> sums(separations.size(), 0.0);
    for (int nx = 0; nx <= n_max; ++nx) {
        const double wx = (nx == 0) ? 1.0 : 2.0;
        double slab = 0.0;  // sum over (ny, nz) of w(n^2)/n^2 for this nx
        const std::size_t nx2 = static_cast<std::size_t>(nx) * nx;
        for (int ny = 0; ny <= n_max; ++ny) {
            const double wy = (ny == 0) ? 1.0 : 2.0;
            const std::size_t base = nx2 + static_cast<std::size_t>(ny) * ny;
            double row = (ny == 0 && nx == 0) ? 0.0 : table[base];  // nz = 0 term, minus origin
            const double* t = table.data() + base;
            for (int nz = 1; nz <= n_max; ++nz) {
                row += 2.0 * t[static_cast<std::size_t>(nz) * nz];
            }
            slab += wy * row;
        }
        for (std::size_t q = 0; q < separations.size(); ++q) {
            sums[q] += wx * cosx[q][nx] * slab;
        }
    }
    return sums;
}

double interaction_energy(const ModeGrid& grid, const BmvParams& p, double separation,
                          double smoothing_length) {
    if (separation == 0.0) {
        throw ContractError("mode_sum_potential: separation must be nonzero");
    }
    if (std::abs(separation) >= 0.5 * grid.box_length()) {
        throw ContractError(
            "mode_sum_potential: |separation| >= box_length/2, periodic images dominate");
    }
    // -2 hbar g1 g2 cos(k.r)/omega reduces exactly to
    // -(4 pi G m1 m2 / V) cos(k.r)/k^2 per mode
    const double beta = 2.0 * kPi / grid.box_length();
    const double sep[] = {separation};
    const double s = lattice_cosine_sums(grid, smoothing_length, sep)[0];
    const PhysicalConstants& pc = grid.constants();
    return -(4.0 * kPi * pc.G * p.m1 * p.m2 / grid.volume()) * s / (beta * beta);
}

}  // namespace

double mode_sum_potential(const ModeGrid& grid, const BmvParams& p, double separation,
                          double smoothing_length) {
    p.validate();
    return interaction_energy(grid, p, separation, smoothing_length);
}

FieldPhaseResult field_phase_and_leakage(const ModeGrid& grid, const BmvParams& p,
                                         const BranchGeometry& geom, double smoothing_length) {
    p.validate();
    const double seps[4] = {
        geom.separation(false, false),  // LL
        geom.separation(false, true),   // LR
        geom.separation(true, false),   // RL
        geom.separation(true, true),    // RR
    };
    for (double s : seps) {
        if (s == 0.0) throw ContractError("field_phase_and_leakage: coincident branch positions");
        if (std::abs(s) >= 0.5 * grid.box_length()) {
            throw ContractError("field_phase_and_leakage: branch separation beyond box/2");
        }
    }
    const double beta = 2.0 * kPi / grid.box_length();
    const auto sums = lattice_cosine_sums(grid, smoothing_length, seps);
    const PhysicalConstants& pc = grid.constants();
    const double prefac = -(4.0 * kPi * pc.G * p.m1 * p.m2 / grid.volume()) / (beta * beta);

    // phi_XY = -E_XY tau/hbar; single-mass self-energies are separation
    // independent and drop out of the relative phases
    double phi[4];
    for (int q = 0; q < 4; ++q) phi[q] = -prefac * sums[q] * p.tau / pc.hbar;

    FieldPhaseResult out;
    const double ref = 0.5 * (phi[0] + phi[3]);  // mean of LL and RR
    out.dphi_lr_eff = phi[1] - ref;
    out.dphi_rl_eff = phi[2] - ref;

    // |alpha| = g/omega falls off as k^{-3/2}; the extremum sits at the
    // smallest lattice wavenumber
    const auto kmin = grid.mode(1, 0, 0);
    const double mmax = std::max(p.m1, p.m2);
    out.max_displacement = coupling(grid, mmax, kmin) / kmin.omega;
    return out;
}

}  // namespace gielab::protocol
