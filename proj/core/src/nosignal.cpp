#include "gielab/nosignal.hpp"

#include <algorithm>
#include <cmath>

#include "gielab/errors.hpp"
#include "gielab/qmat.hpp"

namespace gielab::nosignal {

void Pvm::validate(double tol) const {
    if (projections.empty()) throw ContractError("Pvm: empty measurement");
    const std::size_t n = projections.front().dim();
    ComplexMatrix sum(n);
    for (std::size_t i = 0; i < projections.size(); ++i) {
        const ComplexMatrix& p = projections[i];
        if (p.dim() != n) throw DimensionError("Pvm: projection dimension mismatch");
        if (p.hermiticity_defect() > tol) throw ContractError("Pvm: projection not Hermitian");
        if ((p * p - p).frobenius_norm() > tol) throw ContractError("Pvm: projection not idempotent");
        for (std::size_t j = 0; j < i; ++j) {
            if ((p * projections[j]).frobenius_norm() > tol) {
                throw ContractError("Pvm: projections not mutually orthogonal");
            }
        }
        sum += p;
    }
    sum -= ComplexMatrix::identity(n);
    if (sum.frobenius_norm() > tol) throw ContractError("Pvm: projections do not sum to identity");
}

Pvm Pvm::spectral(const ComplexMatrix& herm, double cluster_tol) {
    return Pvm{algebra::spectral_projections(herm, cluster_tol)};
}

void KrausChannel::validate(double tol) const {
    if (kraus_ops.empty()) throw ContractError("KrausChannel: no Kraus operators");
    const std::size_t n = kraus_ops.front().dim();
    ComplexMatrix sum(n);
    for (const auto& k : kraus_ops) {
        if (k.dim() != n) throw DimensionError("KrausChannel: operator dimension mismatch");
        sum += k.adjoint() * k;
    }
    sum -= ComplexMatrix::identity(n);
    if (sum.frobenius_norm() > tol) {
        throw ContractError("KrausChannel: sum K†K != I (not trace preserving)");
    }
}

ComplexMatrix KrausChannel::apply(const ComplexMatrix& rho) const {
    if (kraus_ops.empty()) throw ContractError("KrausChannel: no Kraus operators");
    ComplexMatrix out(rho.dim());
    for (const auto& k : kraus_ops) {
        out += k * rho * k.adjoint();
    }
    return out;
}

KrausChannel KrausChannel::from_pvm(const Pvm& pvm) { return KrausChannel{pvm.projections}; }

KrausChannel KrausChannel::random(Rng& rng, std::size_t dim, std::size_t kraus_count) {
    if (kraus_count == 0) throw ContractError("KrausChannel::random: kraus_count must be positive");
    // Columns of a Gaussian (kraus_count*dim) x dim isometry, orthonormalized,
    // sliced into dim x dim blocks: sum K†K = V†V = I by construction.
    const std::size_t rows = kraus_count * dim;
    std::vector<std::vector<Complex>> cols(dim, std::vector<Complex>(rows));
    for (auto& c : cols)
        for (auto& x : c) x = rng.gaussian_complex();
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = 0; j < dim; ++j) {
            for (std::size_t k = 0; k < j; ++k) {
                Complex proj = 0.0;
                for (std::size_t r = 0; r < rows; ++r) proj += std::conj(cols[k][r]) * cols[j][r];
                for (std::size_t r = 0; r < rows; ++r) cols[j][r] -= proj * cols[k][r];
            }
            double nrm = 0.0;
            for (std::size_t r = 0; r < rows; ++r) nrm += std::norm(cols[j][r]);
            nrm = std::sqrt(nrm);
            for (std::size_t r = 0; r < rows; ++r) cols[j][r] /= nrm;
        }
    }
    KrausChannel ch;
    for (std::size_t b = 0; b < kraus_count; ++b) {
        ComplexMatrix k(dim);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) k(i, j) = cols[j][b * dim + i];
        ch.kraus_ops.push_back(std::move(k));
    }
    return ch;
}

ComplexMatrix luders_update(const ComplexMatrix& rho, const Pvm& pvm) {
    pvm.validate();
    if (rho.dim() != pvm.projections.front().dim()) {
        throw DimensionError("luders_update: state/PVM dimension mismatch");
    }
    ComplexMatrix out(rho.dim());
    for (const auto& p : pvm.projections) out += p * rho * p;
    return out;
}

MembershipReport is_local_kraus(const KrausChannel& ch, const algebra::AlgebraSpec& a) {
    MembershipReport rep;
    rep.local = true;
    for (const auto& k : ch.kraus_ops) {
        const double r = algebra::membership_residual(k, a.basis());
        rep.worst_residual = std::max(rep.worst_residual, r);
    }
    rep.local = rep.worst_residual <= 1e-9;
    return rep;
}

namespace {

ComplexMatrix sample_state(Rng& rng, std::size_t dim, std::size_t i) {
    // alternate pure and mixed to cover both extreme and interior points
    if (i % 2 == 0) return density(random_pure_state(rng, dim));
    return random_density(rng, dim);
}

}  // namespace

NosignalReport operational_nosignal_check(const algebra::AlgebraSpec& a1,
                                          const algebra::AlgebraSpec& a2,
                                          std::span<const KrausChannel> channels,
                                          const StateSampleSpec& states, bool restricted_class) {
    if (a1.ambient_dim != a2.ambient_dim) {
        throw DimensionError("operational_nosignal_check: ambient dimensions differ");
    }
    if (!restricted_class) {
        for (const auto& ch : channels) {
            if (!is_local_kraus(ch, a1).local) {
                throw ContractError(
                    "operational_nosignal_check: channel is not a1-local "
                    "(pass restricted_class for an externally restricted set)");
            }
        }
    }
    Rng rng(mix_seed(states.seed, "nosignal.states"));
    NosignalReport rep;
    for (std::size_t i = 0; i < states.count; ++i) {
        const ComplexMatrix rho = sample_state(rng, a1.ambient_dim, i);
        for (const auto& ch : channels) {
            const ComplexMatrix rho2 = ch.apply(rho);
            for (const auto& x : a2.generators) {
                const Complex before = (rho * x).trace();
                const Complex after = (rho2 * x).trace();
                rep.worst_deviation = std::max(rep.worst_deviation, std::abs(before - after));
            }
        }
    }
    rep.no_signalling = rep.worst_deviation <= 1e-9;
    return rep;
}

std::string to_string(MacroVerdict v) {
    switch (v) {
        case MacroVerdict::CommutingVerified: return "COMMUTING_VERIFIED";
        case MacroVerdict::WitnessFound: return "WITNESS_FOUND";
        case MacroVerdict::Inconclusive: return "INCONCLUSIVE";
    }
    return "INCONCLUSIVE";
}

MacroReport macrocausality_equiv_test(const algebra::AlgebraSpec& a1,
                                      const algebra::AlgebraSpec& a2, std::size_t budget,
                                      std::uint64_t seed) {
    const auto comm = algebra::commute_check(a1, a2);
    MacroReport rep;
    rep.commuting = comm.commute;
    rep.commutator_residual = comm.max_residual;

    Rng rng(mix_seed(seed, "nosignal.macro"));
    const std::size_t dim = a1.ambient_dim;

    for (std::size_t trial = 0; trial < budget; ++trial) {
        rep.trials_used = trial + 1;
        const Pvm pvm = Pvm::spectral(algebra::random_hermitian_element(rng, a1));
        const ComplexMatrix h2 = algebra::random_hermitian_element(rng, a2);
        const auto projs2 = algebra::spectral_projections(h2);
        const ComplexMatrix& q = projs2[rng.index(projs2.size())];

        // mix of generic states and states adapted to the a2 observable
        // (eigenstate-like samples make witnesses easy to exhibit)
        ComplexMatrix rho(dim);
        if (trial % 2 == 0) {
            rho = sample_state(rng, dim, trial / 2);
        } else {
            const auto spec2 = herm_eig(h2, 1e-8);
            std::vector<Complex> eigstate(dim);
            const std::size_t which = rng.index(dim);
            for (std::size_t i = 0; i < dim; ++i) eigstate[i] = spec2.eigenvectors(i, which);
            rho = density(eigstate);
        }

        const ComplexMatrix rho2 = luders_update(rho, pvm);
        const double dev = std::abs((rho * q).trace().real() - (rho2 * q).trace().real());

        if (rep.commuting) {
            rep.worst_deviation = std::max(rep.worst_deviation, dev);
        } else if (dev > 1e-6) {
            rep.verdict = MacroVerdict::WitnessFound;
            rep.witness = SignallingWitness{rho, pvm, q, dev};
            rep.worst_deviation = dev;
            return rep;
        }
    }

    if (rep.commuting) {
        // a deviation here would mean the pair only almost-commutes; report
        // it as inconclusive rather than as a theorem violation
        rep.verdict = rep.worst_deviation <= 1e-9 ? MacroVerdict::CommutingVerified
                                                  : MacroVerdict::Inconclusive;
    } else {
        rep.verdict = MacroVerdict::Inconclusive;
    }
    return rep;
}

std::string to_string(Entangler e) {
    switch (e) {
        case Entangler::Identity: return "identity";
        case Entangler::Cnot: return "cnot";
        case Entangler::Swap: return "swap";
        case Entangler::Random: return "random";
    }
    return "identity";
}

namespace {

ComplexMatrix entangler_unitary(Entangler kind, std::uint64_t seed) {
    switch (kind) {
        case Entangler::Identity:
            return ComplexMatrix::identity(4);
        case Entangler::Cnot:
            return ComplexMatrix::from_rows({{1, 0, 0, 0},
                                             {0, 1, 0, 0},
                                             {0, 0, 0, 1},
                                             {0, 0, 1, 0}});
        case Entangler::Swap:
            return ComplexMatrix::from_rows({{1, 0, 0, 0},
                                             {0, 0, 1, 0},
                                             {0, 1, 0, 0},
                                             {0, 0, 0, 1}});
        case Entangler::Random: {
            Rng rng(mix_seed(seed, "nosignal.entangler"));
            return random_unitary(rng, 4);
        }
    }
    throw ContractError("entangler_unitary: unknown kind");
}

}  // namespace

std::pair<algebra::AlgebraSpec, algebra::AlgebraSpec> entangler_pair(Entangler kind,
                                                                     std::uint64_t seed) {
    // ambient = A_L (x) A_R (x) B, all qubits
    algebra::AlgebraSpec a1 = algebra::left_factor_algebra(4, 2);  // B(A_L (x) A_R) (x) I_B

    const ComplexMatrix u = kron(ComplexMatrix::identity(2), entangler_unitary(kind, seed));
    const ComplexMatrix udag = u.adjoint();
    const ComplexMatrix id4 = ComplexMatrix::identity(4);
    std::vector<ComplexMatrix> gens2;
    for (const ComplexMatrix& s : {algebra::pauli_x(), algebra::pauli_z()}) {
        gens2.push_back(u * kron(id4, s) * udag);
    }
    algebra::AlgebraSpec a2 = algebra::AlgebraSpec::from_generators(8, std::move(gens2));
    a2 = algebra::generated_algebra(a2);
    return {std::move(a1), std::move(a2)};
}

RestrictedExampleReport restricted_example(Entangler kind, std::uint64_t seed,
                                           std::size_t samples) {
    auto [a1, a2] = entangler_pair(kind, seed);

    RestrictedExampleReport rep;
    rep.entangler = kind;
    rep.samples = samples;

    const auto comm = algebra::commute_check(a1, a2);
    rep.commutator_residual = comm.max_residual;
    rep.noncommuting = !comm.commute;
    rep.degenerate_commuting_case = comm.commute;

    // admissible interventions: channels on the A_L factor only
    Rng rng(mix_seed(seed, "nosignal.restricted"));
    const ComplexMatrix id4 = ComplexMatrix::identity(4);
    for (std::size_t i = 0; i < samples; ++i) {
        KrausChannel local = KrausChannel::random(rng, 2, 1 + rng.index(3));
        KrausChannel lifted;
        for (const auto& k : local.kraus_ops) lifted.kraus_ops.push_back(kron(k, id4));

        const ComplexMatrix rho = sample_state(rng, 8, i);
        const ComplexMatrix rho2 = lifted.apply(rho);
        for (const auto& x : a2.generators) {
            const double dev = std::abs(((rho * x).trace() - (rho2 * x).trace()));
            rep.restricted_worst_deviation = std::max(rep.restricted_worst_deviation, dev);
        }
    }
    rep.restricted_no_signalling = rep.restricted_worst_deviation <= 1e-9;
    return rep;
}

}  // namespace gielab::nosignal
