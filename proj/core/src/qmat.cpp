#include "gielab/qmat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gielab/errors.hpp"

namespace gielab {

namespace {

std::vector<std::size_t> row_major_strides(std::span<const std::size_t> dims) {
    std::vector<std::size_t> strides(dims.size(), 1);
    for (std::size_t f = dims.size(); f-- > 1;) {
        strides[f - 1] = strides[f] * dims[f];
    }
    return strides;
}

void check_dims(std::span<const std::size_t> dims, std::size_t total, const char* where) {
    std::size_t prod = 1;
    for (std::size_t d : dims) {
        if (d == 0) throw DimensionError(std::string(where) + ": zero factor dimension");
        prod *= d;
    }
    if (prod != total) {
        throw DimensionError(std::string(where) + ": product of factor dims != matrix dim");
    }
}

}  // namespace

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t max_dim) {
    const std::size_t na = a.dim(), nb = b.dim();
    if (nb != 0 && na > max_dim / nb) {
        throw DimensionError("kron: output dimension exceeds configured maximum");
    }
    ComplexMatrix out(na * nb);
    for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = 0; j < na; ++j) {
            const Complex aij = a(i, j);
            if (aij == Complex(0.0)) continue;
            for (std::size_t k = 0; k < nb; ++k) {
                for (std::size_t l = 0; l < nb; ++l) {
                    out(i * nb + k, j * nb + l) = aij * b(k, l);
                }
            }
        }
    }
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep) {
    check_dims(dims, m.dim(), "partial_trace");
    std::vector<std::size_t> kept(keep.begin(), keep.end());
    std::sort(kept.begin(), kept.end());
    for (std::size_t f : kept) {
        if (f >= dims.size()) throw DimensionError("partial_trace: keep index out of range");
    }
    std::vector<std::size_t> traced;
    for (std::size_t f = 0; f < dims.size(); ++f) {
        if (!std::binary_search(kept.begin(), kept.end(), f)) traced.push_back(f);
    }

    const auto strides = row_major_strides(dims);
    std::size_t out_dim = 1, tr_dim = 1;
    for (std::size_t f : kept) out_dim *= dims[f];
    for (std::size_t f : traced) tr_dim *= dims[f];

    // offset of a composite index within the full space, given factor subset
    auto offset = [&](const std::vector<std::size_t>& factors, std::size_t flat) {
        std::size_t off = 0;
        for (std::size_t f = factors.size(); f-- > 0;) {
            const std::size_t d = dims[factors[f]];
            off += (flat % d) * strides[factors[f]];
            flat /= d;
        }
        return off;
    };

    ComplexMatrix out(out_dim);
    for (std::size_t i = 0; i < out_dim; ++i) {
        const std::size_t oi = offset(kept, i);
        for (std::size_t j = 0; j < out_dim; ++j) {
            const std::size_t oj = offset(kept, j);
            Complex acc = 0.0;
            for (std::size_t t = 0; t < tr_dim; ++t) {
                const std::size_t ot = offset(traced, t);
                acc += m(oi + ot, oj + ot);
            }
            out(i, j) = acc;
        }
    }
    return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, std::span<const std::size_t> dims,
                                std::span<const std::size_t> transposed) {
    check_dims(dims, m.dim(), "partial_transpose");
    std::vector<bool> flip(dims.size(), false);
    for (std::size_t f : transposed) {
        if (f >= dims.size()) throw DimensionError("partial_transpose: factor index out of range");
        flip[f] = true;
    }
    const auto strides = row_major_strides(dims);
    const std::size_t n = m.dim();

    std::vector<std::size_t> idx_i(dims.size()), idx_j(dims.size());
    ComplexMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t rem = i;
        for (std::size_t f = 0; f < dims.size(); ++f) {
            idx_i[f] = rem / strides[f];
            rem %= strides[f];
        }
        for (std::size_t j = 0; j < n; ++j) {
            rem = j;
            for (std::size_t f = 0; f < dims.size(); ++f) {
                idx_j[f] = rem / strides[f];
                rem %= strides[f];
            }
            std::size_t oi = 0, oj = 0;
            for (std::size_t f = 0; f < dims.size(); ++f) {
                oi += (flip[f] ? idx_j[f] : idx_i[f]) * strides[f];
                oj += (flip[f] ? idx_i[f] : idx_j[f]) * strides[f];
            }
            out(oi, oj) = m(i, j);
        }
    }
    return out;
}

HermitianSpectrum herm_eig(const ComplexMatrix& m, double herm_tol) {
    if (m.hermiticity_defect() > herm_tol) {
        throw ContractError("herm_eig: input is not Hermitian within tolerance");
    }
    const std::size_t n = m.dim();
    ComplexMatrix a = m;
    ComplexMatrix v = ComplexMatrix::identity(n);

    // Cyclic Jacobi with unitary plane rotations. The rotation at pivot (p,q)
    // zeroes a_pq exactly; convergence is quadratic once off-diagonal mass is
    // small. Sweep cap is a safety net only.
    const double scale = std::max(m.frobenius_norm(), 1.0);
    const double tol = 1e-12 * scale;
    const std::size_t max_sweeps = 100 * n * n;

    for (std::size_t sweep = 0; n > 1 && sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) off += std::norm(a(i, j));
        if (std::sqrt(off) <= tol) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex z = a(p, q);
                const double az = std::abs(z);
                if (az <= 1e-300) continue;
                const double phi = std::arg(z);
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = 0.5 * std::atan2(2.0 * az, app - aqq);
                const double c = std::cos(theta);
                const double s = std::sin(theta);
                const Complex eip = std::polar(1.0, phi);
                const Complex eim = std::conj(eip);

                // columns: (p,q) <- (c*p + e^{-i phi} s * q, -e^{i phi} s * p + c*q)
                for (std::size_t i = 0; i < n; ++i) {
                    const Complex colp = a(i, p), colq = a(i, q);
                    a(i, p) = c * colp + eim * s * colq;
                    a(i, q) = -eip * s * colp + c * colq;
                }
                // rows: J† from the left
                for (std::size_t j = 0; j < n; ++j) {
                    const Complex rowp = a(p, j), rowq = a(q, j);
                    a(p, j) = c * rowp + eip * s * rowq;
                    a(q, j) = -eim * s * rowp + c * rowq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const Complex vp = v(i, p), vq = v(i, q);
                    v(i, p) = c * vp + eim * s * vq;
                    v(i, q) = -eip * s * vp + c * vq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i).real();
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return diag[x] > diag[y]; });

    HermitianSpectrum out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n);
    for (std::size_t j = 0; j < n; ++j) {
        out.eigenvalues[j] = diag[order[j]];
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, j) = v(i, order[j]);
    }
    return out;
}

ComplexMatrix herm_exp(const ComplexMatrix& h, Complex scale, double herm_tol) {
    const auto spec = herm_eig(h, herm_tol);
    const std::size_t n = h.dim();
    const ComplexMatrix& u = spec.eigenvectors;
    ComplexMatrix out(n);
    // U diag(exp(scale*lambda)) U†
    for (std::size_t k = 0; k < n; ++k) {
        const Complex ek = std::exp(scale * spec.eigenvalues[k]);
        for (std::size_t i = 0; i < n; ++i) {
            const Complex uik = u(i, k) * ek;
            for (std::size_t j = 0; j < n; ++j) {
                out(i, j) += uik * std::conj(u(j, k));
            }
        }
    }
    return out;
}

double op_norm(const ComplexMatrix& m, double herm_tol) {
    const auto spec = herm_eig(m, herm_tol);
    double worst = 0.0;
    for (double ev : spec.eigenvalues) worst = std::max(worst, std::abs(ev));
    return worst;
}

double trace_norm(const ComplexMatrix& m) {
    if (m.hermiticity_defect() <= 1e-10) {
        const auto spec = herm_eig(m);
        double s = 0.0;
        for (double ev : spec.eigenvalues) s += std::abs(ev);
        return s;
    }
    const auto spec = herm_eig(m.adjoint() * m);
    double s = 0.0;
    for (double ev : spec.eigenvalues) s += std::sqrt(std::max(ev, 0.0));
    return s;
}

}  // namespace gielab
