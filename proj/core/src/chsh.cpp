#include "gielab/chsh.hpp"

#include <algorithm>
#include <cmath>

#include "gielab/errors.hpp"
#include "gielab/parallel.hpp"
#include "gielab/qmat.hpp"
#include "gielab/rng.hpp"

namespace gielab::chsh {

namespace {
constexpr double kSqrt2 = 1.41421356237309504880;
}

void ChshTuple::validate(double herm_tol, double inv_tol) const {
    const std::size_t n = dim();
    for (const ComplexMatrix* m : {&a1, &a2, &b1, &b2}) {
        if (m->dim() != n) throw DimensionError("ChshTuple: observable dimension mismatch");
        if (m->hermiticity_defect() > herm_tol) {
            throw ContractError("ChshTuple: observable is not Hermitian within tolerance");
        }
        if (involution) {
            ComplexMatrix sq = (*m) * (*m);
            sq -= ComplexMatrix::identity(n);
            if (sq.frobenius_norm() > inv_tol) {
                throw ContractError("ChshTuple: involution flag set but X^2 != I");
            }
        }
    }
}

double ChshTuple::cross_commutator_residual() const {
    double worst = 0.0;
    for (const ComplexMatrix* a : {&a1, &a2}) {
        for (const ComplexMatrix* b : {&b1, &b2}) {
            worst = std::max(worst, commutator(*a, *b).frobenius_norm());
        }
    }
    return worst;
}

ComplexMatrix chsh_operator(const ChshTuple& t, Ordering ordering) {
    const std::size_t n = t.dim();
    for (const ComplexMatrix* m : {&t.a2, &t.b1, &t.b2}) {
        if (m->dim() != n) throw DimensionError("chsh_operator: observable dimension mismatch");
    }
    if (ordering == Ordering::AB) {
        return t.a1 * t.b1 + t.a1 * t.b2 + t.a2 * t.b1 - t.a2 * t.b2;
    }
    return t.b1 * t.a1 + t.b2 * t.a1 + t.b1 * t.a2 - t.b2 * t.a2;
}

ComplexMatrix symmetrized_chsh(const ChshTuple& t) {
    ComplexMatrix e = chsh_operator(t, Ordering::AB);
    e += chsh_operator(t, Ordering::BA);
    return 0.5 * e;
}

SosCertificate SosCertificate::from(const ChshTuple& t) {
    const Complex s = kSqrt2 + 1.0;
    SosCertificate c;
    c.f1 = s * (t.a1 - t.b1) + t.a2 - t.b2;
    c.f2 = s * (t.a1 - t.b2) - t.a2 - t.b1;
    c.f3 = s * (t.a2 - t.b1) + t.a1 + t.b2;
    c.f4 = s * (t.a2 + t.b2) - t.a1 - t.b1;
    return c;
}

double sos_residual(const ChshTuple& t) {
    const ComplexMatrix esym = symmetrized_chsh(t);
    const SosCertificate c = SosCertificate::from(t);
    ComplexMatrix squares = t.a1 * t.a1 + t.a2 * t.a2 + t.b1 * t.b1 + t.b2 * t.b2;
    ComplexMatrix fsum = c.f1 * c.f1 + c.f2 * c.f2 + c.f3 * c.f3 + c.f4 * c.f4;
    const ComplexMatrix rhs =
        Complex(1.0 / kSqrt2) * squares - Complex((kSqrt2 - 1.0) / 8.0) * fsum;
    return (esym - rhs).frobenius_norm();
}

namespace {

/// sign() of a Hermitian matrix; zero eigenvalues map to +1 so the result is
/// always an involution.
ComplexMatrix matrix_sign(const ComplexMatrix& m) {
    const auto spec = herm_eig(m, 1e-8);
    const std::size_t n = m.dim();
    ComplexMatrix out(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double s = spec.eigenvalues[k] < 0.0 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const Complex uik = spec.eigenvectors(i, k) * s;
            for (std::size_t j = 0; j < n; ++j) {
                out(i, j) += uik * std::conj(spec.eigenvectors(j, k));
            }
        }
    }
    return out;
}

std::vector<Complex> top_eigenvector(const ComplexMatrix& m, double& value) {
    const auto spec = herm_eig(m, 1e-8);
    value = spec.eigenvalues.front();
    std::vector<Complex> v(m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i) v[i] = spec.eigenvectors(i, 0);
    return v;
}

struct TensorState {
    ComplexMatrix a[2], b[2];  // local observables, dim d
    std::vector<Complex> psi;  // dim d*d
};

// effective Hermitian operator M with tr(A M) = <psi| A (x) S |psi>
ComplexMatrix effective_a(const std::vector<Complex>& psi, const ComplexMatrix& s) {
    const std::size_t d = s.dim();
    ComplexMatrix m(d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            Complex acc = 0.0;
            for (std::size_t b = 0; b < d; ++b) {
                for (std::size_t bp = 0; bp < d; ++bp) {
                    acc += std::conj(psi[i * d + b]) * s(b, bp) * psi[j * d + bp];
                }
            }
            m(j, i) = acc;  // tr(A M) = sum_ij A_ij M_ji
        }
    }
    return m;
}

// effective Hermitian operator N with tr(B N) = <psi| S (x) B |psi>
ComplexMatrix effective_b(const std::vector<Complex>& psi, const ComplexMatrix& s) {
    const std::size_t d = s.dim();
    ComplexMatrix n(d);
    for (std::size_t b = 0; b < d; ++b) {
        for (std::size_t bp = 0; bp < d; ++bp) {
            Complex acc = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t j = 0; j < d; ++j) {
                    acc += std::conj(psi[i * d + b]) * s(i, j) * psi[j * d + bp];
                }
            }
            n(bp, b) = acc;
        }
    }
    return n;
}

SeesawResult run_tensor(std::size_t d, Rng rng, bool random_init, const SeesawOptions& opts) {
    TensorState st;
    if (random_init) {
        for (auto& x : st.a) x = random_involution(rng, d);
        for (auto& x : st.b) x = random_involution(rng, d);
        st.psi = random_pure_state(rng, d * d);
    } else {
        for (auto& x : st.a) x = ComplexMatrix::identity(d);
        for (auto& x : st.b) x = ComplexMatrix::identity(d);
        st.psi = random_pure_state(rng, d * d);
    }

    auto embedded = [&](const TensorState& s) {
        const ComplexMatrix id = ComplexMatrix::identity(d);
        ChshTuple t;
        t.a1 = kron(s.a[0], id);
        t.a2 = kron(s.a[1], id);
        t.b1 = kron(s.b[0], id);
        t.b2 = kron(s.b[1], id);
        t.involution = true;
        return t;
    };

    double value = -4.0 * static_cast<double>(d);
    bool converged = false;
    int round = 0;
    for (; round < opts.max_rounds; ++round) {
        st.a[0] = matrix_sign(effective_a(st.psi, st.b[0] + st.b[1]));
        st.a[1] = matrix_sign(effective_a(st.psi, st.b[0] - st.b[1]));
        st.b[0] = matrix_sign(effective_b(st.psi, st.a[0] + st.a[1]));
        st.b[1] = matrix_sign(effective_b(st.psi, st.a[0] - st.a[1]));
        const ComplexMatrix e = chsh_operator(embedded(st));
        double new_value = 0.0;
        st.psi = top_eigenvector(e, new_value);
        const double gain = new_value - value;
        value = new_value;
        if (round > 0 && std::abs(gain) < opts.tol) {
            converged = true;
            ++round;
            break;
        }
    }

    SeesawResult res;
    res.value = value;
    res.tuple = embedded(st);
    res.state = st.psi;
    res.converged = converged;
    res.rounds = round;
    return res;
}

SeesawResult run_symmetrized(std::size_t d, Rng rng, bool random_init, const SeesawOptions& opts) {
    ChshTuple t;
    t.involution = true;
    if (random_init) {
        t.a1 = random_involution(rng, d);
        t.a2 = random_involution(rng, d);
        t.b1 = random_involution(rng, d);
        t.b2 = random_involution(rng, d);
    } else {
        t.a1 = t.a2 = t.b1 = t.b2 = ComplexMatrix::identity(d);
    }
    std::vector<Complex> psi = random_pure_state(rng, d);

    // M = (S|psi><psi| + |psi><psi|S)/2 satisfies tr(X M) = <psi|X o S|psi>
    auto effective = [&](const ComplexMatrix& s) {
        const ComplexMatrix proj = density(psi);
        return Complex(0.5) * (s * proj + proj * s);
    };

    double value = -4.0 * static_cast<double>(d);
    bool converged = false;
    int round = 0;
    for (; round < opts.max_rounds; ++round) {
        t.a1 = matrix_sign(effective(t.b1 + t.b2));
        t.a2 = matrix_sign(effective(t.b1 - t.b2));
        t.b1 = matrix_sign(effective(t.a1 + t.a2));
        t.b2 = matrix_sign(effective(t.a1 - t.a2));
        double new_value = 0.0;
        psi = top_eigenvector(symmetrized_chsh(t), new_value);
        const double gain = new_value - value;
        value = new_value;
        if (round > 0 && std::abs(gain) < opts.tol) {
            converged = true;
            ++round;
            break;
        }
    }

    SeesawResult res;
    res.value = value;
    res.tuple = t;
    res.state = psi;
    res.converged = converged;
    res.rounds = round;
    return res;
}

}  // namespace

SeesawResult seesaw_maximize(std::size_t local_dim, std::uint64_t seed, const SeesawOptions& opts,
                             SeesawTarget target, unsigned jobs) {
    if (local_dim < 2) throw ContractError("seesaw_maximize: dim must be at least 2");

    auto single = [&](std::uint64_t restart, bool random_init) {
        Rng rng(mix_seed(seed, "chsh.seesaw", restart));
        SeesawResult r = (target == SeesawTarget::TensorChsh)
                             ? run_tensor(local_dim, std::move(rng), random_init, opts)
                             : run_symmetrized(local_dim, std::move(rng), random_init, opts);
        r.best_restart = restart;
        return r;
    };

    if (opts.restarts <= 0) {
        return single(0, /*random_init=*/false);
    }
    std::vector<SeesawResult> runs(static_cast<std::size_t>(opts.restarts));
    parallel_for(runs.size(), jobs,
                 [&](std::size_t i) { runs[i] = single(i, /*random_init=*/true); });
    std::size_t best = 0;
    for (std::size_t i = 1; i < runs.size(); ++i) {
        if (runs[i].value > runs[best].value) best = i;
    }
    return runs[best];
}

}  // namespace gielab::chsh
