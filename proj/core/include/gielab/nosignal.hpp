#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gielab/algebra.hpp"
#include "gielab/matrix.hpp"
#include "gielab/rng.hpp"

namespace gielab::nosignal {

/// Projection-valued measure: Hermitian idempotents, mutually orthogonal,
/// summing to the identity.
struct Pvm {
    std::vector<ComplexMatrix> projections;

    void validate(double tol = 1e-9) const;
    /// Eigenvalue-cluster PVM of a Hermitian operator.
    static Pvm spectral(const ComplexMatrix& herm, double cluster_tol = 1e-8);
};

/// Trace-preserving Kraus channel rho -> sum_i K_i rho K_i†.
struct KrausChannel {
    std::vector<ComplexMatrix> kraus_ops;

    void validate(double tol = 1e-9) const;  ///< sum K†K = I
    ComplexMatrix apply(const ComplexMatrix& rho) const;
    static KrausChannel from_pvm(const Pvm& pvm);
    /// Random channel with `kraus_count` operators (Gaussian isometry, QR).
    static KrausChannel random(Rng& rng, std::size_t dim, std::size_t kraus_count);
};

/// Non-selective Lüders update sum_i P_i rho P_i. Trace preserving,
/// positivity preserving, idempotent for a fixed PVM.
ComplexMatrix luders_update(const ComplexMatrix& rho, const Pvm& pvm);

struct MembershipReport {
    bool local = false;
    double worst_residual = 0.0;
};

/// Are all Kraus operators inside the algebra (Frobenius projection residual
/// <= 1e-9)?
MembershipReport is_local_kraus(const KrausChannel& ch, const algebra::AlgebraSpec& a);

struct StateSampleSpec {
    std::size_t count = 100;
    std::uint64_t seed = 0;
    // states alternate between Haar-like pure states and mixed Wishart states
};

struct NosignalReport {
    bool no_signalling = false;
    double worst_deviation = 0.0;
};

/// Worst |tr(rho X) - tr(ch(rho) X)| over sampled states, the given channels
/// and the a2 generators. Channels must be a1-local unless
/// `restricted_class` marks them as an externally-restricted operation set.
NosignalReport operational_nosignal_check(const algebra::AlgebraSpec& a1,
                                          const algebra::AlgebraSpec& a2,
                                          std::span<const KrausChannel> channels,
                                          const StateSampleSpec& states,
                                          bool restricted_class = false);

enum class MacroVerdict {
    CommutingVerified,  ///< commuting algebras; update invariance confirmed on the sampled suite
    WitnessFound,       ///< noncommuting; an explicit signalling PVM was found
    Inconclusive,       ///< noncommuting, but no witness within the search budget
};

std::string to_string(MacroVerdict v);

struct SignallingWitness {
    ComplexMatrix rho;
    Pvm pvm;               ///< Lüders measurement on algebra 1
    ComplexMatrix observable;  ///< projection in algebra 2 whose mean moves
    double deviation = 0.0;
};

struct MacroReport {
    MacroVerdict verdict = MacroVerdict::Inconclusive;
    bool commuting = false;
    double commutator_residual = 0.0;
    double worst_deviation = 0.0;  ///< over the verification suite (commuting case)
    std::optional<SignallingWitness> witness;
    std::size_t trials_used = 0;
};

/// Two-sided probe of "Lüders updates on A1 never move A2 statistics iff the
/// algebras commute": commuting pairs get a randomized invariance sweep;
/// noncommuting pairs get a budgeted witness search (Inconclusive is an
/// honest outcome, never a refutation).
MacroReport macrocausality_equiv_test(const algebra::AlgebraSpec& a1,
                                      const algebra::AlgebraSpec& a2, std::size_t budget,
                                      std::uint64_t seed);

enum class Entangler { Identity, Cnot, Swap, Random };

std::string to_string(Entangler e);

struct RestrictedExampleReport {
    Entangler entangler = Entangler::Identity;
    double commutator_residual = 0.0;
    bool noncommuting = false;
    double restricted_worst_deviation = 0.0;
    bool restricted_no_signalling = false;
    bool degenerate_commuting_case = false;  ///< product entangler, algebras commute
    std::size_t samples = 0;
};

/// Three qubits (A_L, A_R, B). Algebra 1 is everything on A_L (x) A_R;
/// algebra 2 is B's algebra conjugated by an entangler on (A_R, B). For an
/// entangling unitary the pair fails to commute, yet channels restricted to
/// the A_L factor can never move algebra-2 statistics: no-signalling without
/// commutativity.
RestrictedExampleReport restricted_example(Entangler kind, std::uint64_t seed,
                                           std::size_t samples = 1000);

/// The conjugated pair (A1, A2) used by restricted_example; exposed for the
/// witness-search criteria.
std::pair<algebra::AlgebraSpec, algebra::AlgebraSpec> entangler_pair(Entangler kind,
                                                                     std::uint64_t seed);

}  // namespace gielab::nosignal
