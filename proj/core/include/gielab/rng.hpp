#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "gielab/matrix.hpp"

namespace gielab {

/// Mix a master seed with a per-module tag and a stream index. Adding a new
/// consumer never perturbs another's stream.
std::uint64_t mix_seed(std::uint64_t master, std::string_view tag, std::uint64_t index = 0);

/// Deterministic random source. Distributions are hand-rolled on top of
/// mt19937_64 so that a given seed yields the same stream on every platform
/// (std::normal_distribution et al. are implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// uniform in [0, 1)
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// standard normal via Box-Muller
    double gaussian();

    /// real and imaginary parts each standard normal
    Complex gaussian_complex() { return {gaussian(), gaussian()}; }

    /// uniform index in [0, n)
    std::size_t index(std::size_t n);

    bool coin() { return (gen_() >> 63) != 0; }

private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// iid complex Gaussian entries.
ComplexMatrix random_gaussian_matrix(Rng& rng, std::size_t dim);

/// Haar-like unitary from QR of a Gaussian matrix (modified Gram-Schmidt
/// with a re-orthogonalization pass).
ComplexMatrix random_unitary(Rng& rng, std::size_t dim);

/// (G + G†)/2 with Gaussian G.
ComplexMatrix random_hermitian(Rng& rng, std::size_t dim);

/// Hermitian involution U diag(±1) U†; both signs present whenever dim >= 2.
ComplexMatrix random_involution(Rng& rng, std::size_t dim);

/// Random density matrix of the given rank (Wishart-style, trace one).
ComplexMatrix random_density(Rng& rng, std::size_t dim, std::size_t rank = 0);

std::vector<Complex> random_pure_state(Rng& rng, std::size_t dim);

}  // namespace gielab
