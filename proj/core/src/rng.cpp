#include "gielab/rng.hpp"

#include <cmath>

#include "gielab/constants.hpp"
#include "gielab/errors.hpp"

namespace gielab {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t master, std::string_view tag, std::uint64_t index) {
    // FNV-1a over the tag, then splitmix the three words together.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    std::uint64_t state = master;
    state ^= splitmix64(state) ^ h;
    state ^= splitmix64(state) ^ index;
    return splitmix64(state);
}

double Rng::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // Box-Muller; u1 in (0,1] to keep the log finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * kPi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * kPi * u2);
}

std::size_t Rng::index(std::size_t n) {
    if (n == 0) throw ContractError("Rng::index: empty range");
    // rejection-free modulo is fine here; n is tiny compared to 2^64
    return static_cast<std::size_t>(next_u64() % n);
}

ComplexMatrix random_gaussian_matrix(Rng& rng, std::size_t dim) {
    ComplexMatrix g(dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) g(i, j) = rng.gaussian_complex();
    return g;
}

ComplexMatrix random_unitary(Rng& rng, std::size_t dim) {
    ComplexMatrix g = random_gaussian_matrix(rng, dim);
    // column-wise modified Gram-Schmidt, done twice for orthogonality at
    // machine precision
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = 0; j < dim; ++j) {
            for (std::size_t k = 0; k < j; ++k) {
                Complex proj = 0.0;
                for (std::size_t i = 0; i < dim; ++i) proj += std::conj(g(i, k)) * g(i, j);
                for (std::size_t i = 0; i < dim; ++i) g(i, j) -= proj * g(i, k);
            }
            double nrm = 0.0;
            for (std::size_t i = 0; i < dim; ++i) nrm += std::norm(g(i, j));
            nrm = std::sqrt(nrm);
            if (nrm == 0.0) throw ContractError("random_unitary: degenerate Gaussian sample");
            for (std::size_t i = 0; i < dim; ++i) g(i, j) /= nrm;
        }
    }
    return g;
}

ComplexMatrix random_hermitian(Rng& rng, std::size_t dim) {
    ComplexMatrix g = random_gaussian_matrix(rng, dim);
    ComplexMatrix h(dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) h(i, j) = 0.5 * (g(i, j) + std::conj(g(j, i)));
    return h;
}

ComplexMatrix random_involution(Rng& rng, std::size_t dim) {
    std::vector<double> signs(dim);
    for (auto& s : signs) s = rng.coin() ? 1.0 : -1.0;
    if (dim >= 2) {
        // force both eigenvalues to appear; an all-equal draw would give ±I
        bool has_pos = false, has_neg = false;
        for (double s : signs) (s > 0 ? has_pos : has_neg) = true;
        if (!has_pos) signs[rng.index(dim)] = 1.0;
        if (!has_neg) signs[rng.index(dim)] = -1.0;
    }
    const ComplexMatrix u = random_unitary(rng, dim);
    ComplexMatrix x(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        for (std::size_t i = 0; i < dim; ++i) {
            const Complex uik = u(i, k) * signs[k];
            for (std::size_t j = 0; j < dim; ++j) x(i, j) += uik * std::conj(u(j, k));
        }
    }
    return x;
}

ComplexMatrix random_density(Rng& rng, std::size_t dim, std::size_t rank) {
    if (rank == 0 || rank > dim) rank = dim;
    ComplexMatrix rho(dim);
    for (std::size_t r = 0; r < rank; ++r) {
        std::vector<Complex> g(dim);
        for (auto& x : g) x = rng.gaussian_complex();
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) rho(i, j) += g[i] * std::conj(g[j]);
    }
    const double tr = rho.trace().real();
    rho *= Complex(1.0 / tr, 0.0);
    return rho;
}

std::vector<Complex> random_pure_state(Rng& rng, std::size_t dim) {
    std::vector<Complex> psi(dim);
    for (auto& x : psi) x = rng.gaussian_complex();
    normalize(psi);
    return psi;
}

}  // namespace gielab
