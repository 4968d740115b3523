#pragma once

#include <cstdint>
#include <vector>

#include "gielab/matrix.hpp"

namespace gielab::chsh {

/// Four Hermitian observables (A1, A2, B1, B2) on one Hilbert space. The
/// involution flag additionally asserts X^2 = I for each.
struct ChshTuple {
    ComplexMatrix a1, a2, b1, b2;
    bool involution = false;

    std::size_t dim() const { return a1.dim(); }
    /// Hermiticity to herm_tol; if the involution flag is set, also
    /// ||X^2 - I||_F <= inv_tol for each observable.
    void validate(double herm_tol = 1e-10, double inv_tol = 1e-9) const;
    /// Largest ||[A_i, B_j]||_F across the four A/B pairs.
    double cross_commutator_residual() const;
};

enum class Ordering { AB, BA };

/// E = A1 B1 + A1 B2 + A2 B1 - A2 B2 (Ordering::AB) or the reversed-product
/// expression E' (Ordering::BA). Hermitian only when the A's and B's commute
/// pairwise; E' = E† for Hermitian tuples either way.
ComplexMatrix chsh_operator(const ChshTuple& t, Ordering ordering = Ordering::AB);

/// Jordan-symmetrized CHSH observable (E + E')/2. Hermitian for every
/// Hermitian tuple; equal to E when the tuple cross-commutes.
ComplexMatrix symmetrized_chsh(const ChshTuple& t);

/// The four square generators of the symmetrized-CHSH decomposition
///   E_sym = (A1^2+A2^2+B1^2+B2^2)/sqrt(2) - (sqrt(2)-1)/8 * sum_k F_k^2.
struct SosCertificate {
    ComplexMatrix f1, f2, f3, f4;
    static SosCertificate from(const ChshTuple& t);
};

/// Frobenius norm of (E_sym - certificate right-hand side). The identity is
/// algebraic, so this is pure roundoff (<~1e-12) for every Hermitian tuple;
/// for involution tuples it certifies E_sym <= 2 sqrt(2) I.
double sos_residual(const ChshTuple& t);

enum class SeesawTarget {
    TensorChsh,       ///< A_i (x) I and I (x) B_j on a local_dim^2 space
    SymmetrizedChsh,  ///< all four observables on one local_dim space
};

struct SeesawOptions {
    int restarts = 20;      ///< 0 = single run from the identity tuple
    int max_rounds = 500;
    double tol = 1e-10;     ///< stop when the value improves by less
};

struct SeesawResult {
    double value = 0.0;
    ChshTuple tuple;              ///< embedded observables on the full space
    std::vector<Complex> state;
    bool converged = false;
    int rounds = 0;               ///< rounds used by the best restart
    std::uint64_t best_restart = 0;
};

/// Alternating maximization of <psi|E|psi> (or <psi|E_sym|psi>): with the
/// state and all but one observable fixed, the optimal Hermitian involution
/// is sign() of the effective Hermitian operator; the state update takes the
/// top eigenvector. The value is nondecreasing round over round; restarts
/// draw seeded random involutions and report the best run.
SeesawResult seesaw_maximize(std::size_t local_dim, std::uint64_t seed, const SeesawOptions& opts,
                             SeesawTarget target, unsigned jobs = 1);

}  // namespace gielab::chsh
