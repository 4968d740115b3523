#include "gielab/algebra.hpp"

#include <algorithm>
#include <cmath>

#include "gielab/errors.hpp"
#include "gielab/qmat.hpp"

namespace gielab::algebra {

namespace {

Complex frobenius_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
    return vec_dot(a.entries(), b.entries());
}

/// Orthonormal basis of the joint null space of a family of linear maps on
/// matrix space, each given column-wise as vec images. `columns[i]` is the
/// list of constraint images of the i-th basis direction; the null space is
/// read off the small Gram matrix.
std::vector<std::vector<Complex>> null_space_from_gram(
    const std::vector<std::vector<Complex>>& constraint_columns, double rel_tol = 1e-14) {
    const std::size_t k = constraint_columns.size();
    ComplexMatrix gram(k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i; j < k; ++j) {
            const Complex g = vec_dot(constraint_columns[i], constraint_columns[j]);
            gram(i, j) = g;
            gram(j, i) = std::conj(g);
        }
    }
    const auto spec = herm_eig(gram, 1e-8);
    const double cutoff = rel_tol * std::max(spec.eigenvalues.empty() ? 0.0 : spec.eigenvalues.front(), 1.0);
    std::vector<std::vector<Complex>> null_vectors;
    for (std::size_t idx = k; idx-- > 0;) {
        if (spec.eigenvalues[idx] > cutoff) break;
        std::vector<Complex> v(k);
        for (std::size_t i = 0; i < k; ++i) v[i] = spec.eigenvectors(i, idx);
        null_vectors.push_back(std::move(v));
    }
    return null_vectors;
}

ComplexMatrix devec(std::size_t n, std::span<const Complex> v) {
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = v[i * n + j];
    return m;
}

std::vector<Complex> vec_of(const ComplexMatrix& m) {
    return {m.entries().begin(), m.entries().end()};
}

}  // namespace

AlgebraSpec AlgebraSpec::from_generators(std::size_t ambient_dim,
                                         std::vector<ComplexMatrix> generators) {
    AlgebraSpec a;
    a.ambient_dim = ambient_dim;
    a.generators = std::move(generators);
    for (const auto& g : a.generators) {
        if (g.dim() != ambient_dim) {
            throw DimensionError("AlgebraSpec: generator does not square with ambient_dim");
        }
    }
    return a;
}

std::size_t AlgebraSpec::algebra_dim() const { return basis().size(); }

const std::vector<ComplexMatrix>& AlgebraSpec::basis() const {
    if (!closed_basis) {
        throw ContractError("AlgebraSpec: closed basis not computed (run generated_algebra)");
    }
    return *closed_basis;
}

void AlgebraSpec::validate() const {
    if (ambient_dim == 0) throw DimensionError("AlgebraSpec: ambient_dim must be positive");
    for (const auto& g : generators) {
        if (g.dim() != ambient_dim) {
            throw DimensionError("AlgebraSpec: generator does not square with ambient_dim");
        }
    }
    if (closed_basis) {
        const auto& b = *closed_basis;
        for (std::size_t i = 0; i < b.size(); ++i) {
            if (b[i].dim() != ambient_dim) {
                throw DimensionError("AlgebraSpec: basis element dimension mismatch");
            }
            for (std::size_t j = 0; j <= i; ++j) {
                const Complex g = frobenius_inner(b[i], b[j]);
                const double target = (i == j) ? 1.0 : 0.0;
                if (std::abs(g - target) > 1e-9) {
                    throw ContractError("AlgebraSpec: closed_basis is not orthonormal");
                }
            }
        }
        if (closure_residual(b) > 1e-9) {
            throw ContractError("AlgebraSpec: closed_basis is not closed under * and products");
        }
    }
}

double membership_residual(const ComplexMatrix& x, std::span<const ComplexMatrix> basis) {
    ComplexMatrix res = x;
    for (const auto& b : basis) {
        const Complex coeff = frobenius_inner(b, x);
        res -= coeff * b;
    }
    return res.frobenius_norm();
}

double closure_residual(std::span<const ComplexMatrix> basis) {
    double worst = 0.0;
    for (const auto& a : basis) {
        worst = std::max(worst, membership_residual(a.adjoint(), basis));
        for (const auto& b : basis) {
            worst = std::max(worst, membership_residual(a * b, basis));
        }
    }
    return worst;
}

double max_principal_angle_sin(std::span<const ComplexMatrix> a,
                               std::span<const ComplexMatrix> b) {
    if (a.empty()) return 0.0;
    // residuals of a's basis against span(b); largest singular value of the
    // residual family = sin of the largest principal angle
    std::vector<std::vector<Complex>> residuals;
    residuals.reserve(a.size());
    for (const auto& x : a) {
        ComplexMatrix r = x;
        for (const auto& y : b) {
            r -= frobenius_inner(y, x) * y;
        }
        residuals.push_back(vec_of(r));
    }
    ComplexMatrix gram(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = i; j < a.size(); ++j) {
            const Complex g = vec_dot(residuals[i], residuals[j]);
            gram(i, j) = g;
            gram(j, i) = std::conj(g);
        }
    }
    const auto spec = herm_eig(gram, 1e-8);
    return std::sqrt(std::max(spec.eigenvalues.front(), 0.0));
}

bool subspaces_equal(std::span<const ComplexMatrix> a, std::span<const ComplexMatrix> b,
                     double tol) {
    if (a.size() != b.size()) return false;
    return max_principal_angle_sin(a, b) <= tol && max_principal_angle_sin(b, a) <= tol;
}

AlgebraSpec commutant(const AlgebraSpec& a) {
    a.validate();
    const std::size_t n = a.ambient_dim;
    // constraint images: X -> XG - GX for every generator and its adjoint
    std::vector<ComplexMatrix> constraints;
    for (const auto& g : a.generators) {
        const double nrm = g.frobenius_norm();
        if (nrm == 0.0) continue;
        constraints.push_back(Complex(1.0 / nrm) * g);
        const ComplexMatrix ga = g.adjoint();
        constraints.push_back(Complex(1.0 / nrm) * ga);
    }

    // basis directions e_{ij}; image of X under [., G] stacked over G
    std::vector<std::vector<Complex>> columns(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<Complex> col;
            col.reserve(constraints.size() * n * n);
            for (const auto& g : constraints) {
                // vec(e_ij G - G e_ij): row i of G-transpose placed at row i,
                // column j of G negated at column j
                std::vector<Complex> img(n * n, Complex(0.0));
                for (std::size_t c = 0; c < n; ++c) img[i * n + c] += g(j, c);
                for (std::size_t r = 0; r < n; ++r) img[r * n + j] -= g(r, i);
                col.insert(col.end(), img.begin(), img.end());
            }
            columns[i * n + j] = std::move(col);
        }
    }

    const auto null_vecs = null_space_from_gram(columns);
    std::vector<ComplexMatrix> basis;
    basis.reserve(null_vecs.size());
    for (const auto& v : null_vecs) basis.push_back(devec(n, v));

    AlgebraSpec out;
    out.ambient_dim = n;
    out.generators = basis;
    out.closed_basis = std::move(basis);
    return out;
}

AlgebraSpec generated_algebra(const AlgebraSpec& a) {
    AlgebraSpec dbl = commutant(commutant(a));
    AlgebraSpec out = a;
    out.closed_basis = std::move(dbl.closed_basis);
    return out;
}

CenterResult center_and_factor(const AlgebraSpec& a) {
    const auto& basis = a.basis();
    const std::size_t k = basis.size();
    // coefficients c with sum_i c_i [B_i, B_j] = 0 for all j
    std::vector<std::vector<Complex>> columns(k);
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<Complex> col;
        for (std::size_t j = 0; j < k; ++j) {
            const ComplexMatrix comm = commutator(basis[i], basis[j]);
            const auto v = vec_of(comm);
            col.insert(col.end(), v.begin(), v.end());
        }
        columns[i] = std::move(col);
    }
    const auto null_vecs = null_space_from_gram(columns);

    CenterResult res;
    for (const auto& c : null_vecs) {
        ComplexMatrix z(a.ambient_dim);
        for (std::size_t i = 0; i < k; ++i) z += c[i] * basis[i];
        res.center_basis.push_back(std::move(z));
    }
    res.is_factor = res.center_basis.size() == 1;
    return res;
}

CommuteReport commute_check(const AlgebraSpec& a1, const AlgebraSpec& a2, double tol) {
    if (a1.ambient_dim != a2.ambient_dim) {
        throw DimensionError("commute_check: ambient dimensions differ");
    }
    CommuteReport rep;
    for (const auto& g : a1.generators) {
        for (const auto& h : a2.generators) {
            rep.max_residual = std::max(rep.max_residual, commutator(g, h).frobenius_norm());
        }
    }
    rep.commute = rep.max_residual <= tol;
    return rep;
}

ComplexMatrix projection_meet(const ComplexMatrix& e, const ComplexMatrix& f, double tol) {
    for (const ComplexMatrix* p : {&e, &f}) {
        if (p->hermiticity_defect() > 1e-10 || ((*p) * (*p) - (*p)).frobenius_norm() > 1e-10) {
            throw ContractError("projection_meet: input is not an orthogonal projection");
        }
    }
    if (e.dim() != f.dim()) throw DimensionError("projection_meet: dimension mismatch");
    // range(e) ∩ range(f) is exactly the eigenvalue-1 space of (e+f)/2
    const ComplexMatrix avg = Complex(0.5) * (e + f);
    const auto spec = herm_eig(avg, 1e-9);
    ComplexMatrix meet(e.dim());
    for (std::size_t k = 0; k < spec.eigenvalues.size(); ++k) {
        if (spec.eigenvalues[k] < 1.0 - tol) break;
        for (std::size_t i = 0; i < e.dim(); ++i) {
            const Complex uik = spec.eigenvectors(i, k);
            for (std::size_t j = 0; j < e.dim(); ++j) {
                meet(i, j) += uik * std::conj(spec.eigenvectors(j, k));
            }
        }
    }
    return meet;
}

ComplexMatrix random_hermitian_element(Rng& rng, const AlgebraSpec& a) {
    const auto& basis = a.basis();
    ComplexMatrix x(a.ambient_dim);
    for (const auto& b : basis) x += rng.gaussian_complex() * b;
    ComplexMatrix h(a.ambient_dim);
    const ComplexMatrix xa = x.adjoint();
    h = Complex(0.5) * (x + xa);
    return h;
}

std::vector<ComplexMatrix> spectral_projections(const ComplexMatrix& herm, double cluster_tol) {
    const auto spec = herm_eig(herm, 1e-8);
    const std::size_t n = herm.dim();
    const double scale = std::max(std::abs(spec.eigenvalues.front()),
                                  std::abs(spec.eigenvalues.back()));
    const double gap = cluster_tol * std::max(scale, 1.0);

    std::vector<ComplexMatrix> projections;
    std::size_t start = 0;
    while (start < n) {
        std::size_t stop = start + 1;
        while (stop < n && spec.eigenvalues[stop - 1] - spec.eigenvalues[stop] <= gap) ++stop;
        ComplexMatrix p(n);
        for (std::size_t k = start; k < stop; ++k) {
            for (std::size_t i = 0; i < n; ++i) {
                const Complex uik = spec.eigenvectors(i, k);
                for (std::size_t j = 0; j < n; ++j) {
                    p(i, j) += uik * std::conj(spec.eigenvectors(j, k));
                }
            }
        }
        projections.push_back(std::move(p));
        start = stop;
    }
    return projections;
}

UncorrelatedReport uncorrelated_check(const ComplexMatrix& rho, const AlgebraSpec& a1,
                                      const AlgebraSpec& a2, std::size_t samples,
                                      std::uint64_t seed) {
    if (rho.dim() != a1.ambient_dim || rho.dim() != a2.ambient_dim) {
        throw DimensionError("uncorrelated_check: state/algebra dimension mismatch");
    }
    Rng rng(mix_seed(seed, "algebra.uncorrelated"));
    UncorrelatedReport rep;
    rep.samples = samples;
    for (std::size_t s = 0; s < samples; ++s) {
        const auto projs1 = spectral_projections(random_hermitian_element(rng, a1));
        const auto projs2 = spectral_projections(random_hermitian_element(rng, a2));
        // random nonempty proper union of spectral clusters on each side
        auto pick = [&](const std::vector<ComplexMatrix>& projs) {
            ComplexMatrix e(rho.dim());
            std::size_t taken = 0;
            for (std::size_t i = 0; i < projs.size(); ++i) {
                if (rng.coin()) {
                    e += projs[i];
                    ++taken;
                }
            }
            if (taken == 0) e = projs[rng.index(projs.size())];
            else if (taken == projs.size() && projs.size() > 1) e -= projs[rng.index(projs.size())];
            return e;
        };
        const ComplexMatrix e = pick(projs1);
        const ComplexMatrix f = pick(projs2);
        const ComplexMatrix meet = projection_meet(e, f);
        const double joint = (rho * meet).trace().real();
        const double marg = (rho * e).trace().real() * (rho * f).trace().real();
        rep.worst_deviation = std::max(rep.worst_deviation, std::abs(joint - marg));
    }
    rep.uncorrelated = rep.worst_deviation <= 1e-8;
    return rep;
}

ComplexMatrix pauli_x() { return ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}); }
ComplexMatrix pauli_y() {
    return ComplexMatrix::from_rows({{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}});
}
ComplexMatrix pauli_z() { return ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, -1.0}}); }

namespace {

// orthonormal matrix units of one tensor factor, embedded in the ambient space
std::vector<ComplexMatrix> factor_units(std::size_t d_left, std::size_t d_right, bool left) {
    const std::size_t df = left ? d_left : d_right;
    const std::size_t other = left ? d_right : d_left;
    std::vector<ComplexMatrix> units;
    units.reserve(df * df);
    const double norm = 1.0 / std::sqrt(static_cast<double>(other));
    for (std::size_t i = 0; i < df; ++i) {
        for (std::size_t j = 0; j < df; ++j) {
            ComplexMatrix u(df);
            u(i, j) = 1.0;
            const ComplexMatrix id = ComplexMatrix::identity(other);
            units.push_back(Complex(norm) * (left ? kron(u, id) : kron(id, u)));
        }
    }
    return units;
}

}  // namespace

AlgebraSpec left_factor_algebra(std::size_t d_left, std::size_t d_right) {
    AlgebraSpec a;
    a.ambient_dim = d_left * d_right;
    a.generators = factor_units(d_left, d_right, true);
    a.closed_basis = a.generators;
    return a;
}

AlgebraSpec right_factor_algebra(std::size_t d_left, std::size_t d_right) {
    AlgebraSpec a;
    a.ambient_dim = d_left * d_right;
    a.generators = factor_units(d_left, d_right, false);
    a.closed_basis = a.generators;
    return a;
}

}  // namespace gielab::algebra
