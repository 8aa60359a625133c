#include "ot/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ot/errors.hpp"

namespace ot {

namespace {

constexpr double kStructureTol = 1e-12;
constexpr double kUnitaryTol = 1e-10;

void require_square(const ComplexMatrix& m, const char* what) {
    if (m.rows() == 0 || !m.square()) throw DimensionError(std::string(what) + ": matrix must be square and non-empty");
    if (!m.all_finite()) throw InvariantError(std::string(what) + ": non-finite entry");
}

double structure_tol(const ComplexMatrix& m) { return kStructureTol * std::max(1.0, m.max_abs()); }

}  // namespace

double hermitian_residual(const ComplexMatrix& a) {
    double r = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r = std::max(r, std::abs(a(i, j) - std::conj(a(j, i))));
    return r;
}

double skew_hermitian_residual(const ComplexMatrix& a) {
    double r = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r = std::max(r, std::abs(a(i, j) + std::conj(a(j, i))));
    return r;
}

HermitianMatrix::HermitianMatrix(ComplexMatrix m) : m_(std::move(m)) {
    require_square(m_, "HermitianMatrix");
    if (hermitian_residual(m_) > structure_tol(m_)) throw InvariantError("HermitianMatrix: A != A^dagger");
}

HermitianMatrix HermitianMatrix::from_real(const RealMatrix& m) {
    if (!m.square()) throw DimensionError("HermitianMatrix::from_real: not square");
    ComplexMatrix c(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) c(i, j) = 0.5 * (m(i, j) + m(j, i));
    return HermitianMatrix(std::move(c));
}

RealVector HermitianMatrix::diagonal() const {
    RealVector d(size());
    for (std::size_t i = 0; i < size(); ++i) d[i] = m_(i, i).real();
    return d;
}

SkewHermitianMatrix::SkewHermitianMatrix(ComplexMatrix m) : m_(std::move(m)) {
    require_square(m_, "SkewHermitianMatrix");
    if (skew_hermitian_residual(m_) > structure_tol(m_)) throw InvariantError("SkewHermitianMatrix: A != -A^dagger");
}

SkewHermitianMatrix SkewHermitianMatrix::imaginary_diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = cplx(0.0, values[i]);
    return SkewHermitianMatrix(std::move(m));
}

SkewHermitianMatrix SkewHermitianMatrix::skew_part(const ComplexMatrix& m) {
    if (!m.square()) throw DimensionError("skew_part: not square");
    ComplexMatrix s(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) s(i, j) = 0.5 * (m(i, j) - std::conj(m(j, i)));
    return SkewHermitianMatrix(std::move(s));
}

HermitianMatrix SkewHermitianMatrix::divided_by_i() const {
    ComplexMatrix h(m_.rows(), m_.cols());
    for (std::size_t i = 0; i < m_.rows(); ++i)
        for (std::size_t j = 0; j < m_.cols(); ++j) h(i, j) = cplx(0.0, -1.0) * m_(i, j);
    // Symmetrize so roundoff never trips the Hermitian check.
    for (std::size_t i = 0; i < h.rows(); ++i) {
        h(i, i) = cplx(h(i, i).real(), 0.0);
        for (std::size_t j = i + 1; j < h.cols(); ++j) {
            const cplx avg = 0.5 * (h(i, j) + std::conj(h(j, i)));
            h(i, j) = avg;
            h(j, i) = std::conj(avg);
        }
    }
    return HermitianMatrix(std::move(h));
}

UnitaryMatrix::UnitaryMatrix(ComplexMatrix m) : m_(std::move(m)) {
    require_square(m_, "UnitaryMatrix");
    ComplexMatrix g = adjoint(m_) * m_;
    g -= ComplexMatrix::identity(m_.rows());
    if (g.max_abs() > kUnitaryTol) throw InvariantError("UnitaryMatrix: Q^dagger Q != I");
}

UnitaryMatrix UnitaryMatrix::identity(std::size_t n) { return UnitaryMatrix(ComplexMatrix::identity(n)); }

Eigensystem jacobi_eigh(const HermitianMatrix& h, int max_sweeps) {
    const std::size_t n = h.size();
    ComplexMatrix a = h.matrix();
    ComplexMatrix v = ComplexMatrix::identity(n);

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) s += std::norm(a(p, q));
        return std::sqrt(2.0 * s);
    };
    const double scale = std::max(a.frobenius_norm(), 1e-300);
    const double target = 4.0 * std::numeric_limits<double>::epsilon() * scale;

    int sweep = 0;
    for (;; ++sweep) {
        if (off_norm() <= target) break;
        if (sweep >= max_sweeps) throw ConvergenceError("jacobi_eigh: no convergence", off_norm());
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double r = std::abs(apq);
                if (r == 0.0) continue;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                // After a few sweeps, drop entries that no longer change the diagonal.
                if (sweep > 3 && std::abs(app) + 100.0 * r == std::abs(app) &&
                    std::abs(aqq) + 100.0 * r == std::abs(aqq)) {
                    a(p, q) = a(q, p) = 0.0;
                    continue;
                }
                // Phase e^{-i phi} on column q makes the pivot real, then a real
                // rotation annihilates it. U = diag(1, e^{-i phi}) * [[c, s], [-s, c]].
                const cplx phase = std::conj(apq / r);
                const double theta = (aqq - app) / (2.0 * r);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const cplx u_pp = c, u_pq = s, u_qp = -s * phase, u_qq = c * phase;

                for (std::size_t k = 0; k < n; ++k) {
                    const cplx akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp * u_pp + akq * u_qp;
                    a(k, q) = akp * u_pq + akq * u_qq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = std::conj(u_pp) * apk + std::conj(u_qp) * aqk;
                    a(q, k) = std::conj(u_pq) * apk + std::conj(u_qq) * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp * u_pp + vkq * u_qp;
                    v(k, q) = vkp * u_pq + vkq * u_qq;
                }
                a(p, q) = a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x).real() > a(y, y).real(); });
    RealVector values(n);
    ComplexMatrix q(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        values[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) q(i, k) = v(i, order[k]);
    }
    return Eigensystem{std::move(values), UnitaryMatrix(std::move(q)), sweep};
}

ComplexMatrix conjugate_diagonal(const ComplexMatrix& q, std::span<const double> d) {
    if (!q.square() || q.rows() != d.size()) throw DimensionError("conjugate_diagonal: shape mismatch");
    const std::size_t n = d.size();
    ComplexMatrix r(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            cplx s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += q(i, k) * d[k] * std::conj(q(j, k));
            r(i, j) = s;
        }
    return r;
}

ComplexMatrix conjugate(const ComplexMatrix& u, const ComplexMatrix& a) { return u * a * adjoint(u); }

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (!a.square() || a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("commutator: operands must be square and of equal size");
    return a * b - b * a;
}

SkewHermitianMatrix commutator(const SkewHermitianMatrix& a, const SkewHermitianMatrix& b) {
    // [A,B] of skew-Hermitian A,B is skew-Hermitian; the projection only removes roundoff.
    return SkewHermitianMatrix::skew_part(commutator(a.matrix(), b.matrix()));
}

double trace_pairing(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.cols() || a.cols() != b.rows() || !a.square())
        throw DimensionError("trace_pairing: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) s += (a(i, k) * b(k, i)).real();
    return s;
}

ComplexMatrix solve(const ComplexMatrix& a_in, const ComplexMatrix& b_in) {
    if (!a_in.square() || a_in.rows() != b_in.rows()) throw DimensionError("solve: shape mismatch");
    if (!a_in.all_finite() || !b_in.all_finite()) throw InvariantError("solve: non-finite input");
    ComplexMatrix a = a_in, b = b_in;
    const std::size_t n = a.rows(), m = b.cols();
    const double scale = std::max(a.max_abs(), 1e-300);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
        if (std::abs(a(piv, k)) <= 1e-14 * scale) throw InvariantError("solve: singular matrix");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            for (std::size_t j = 0; j < m; ++j) std::swap(b(k, j), b(piv, j));
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const cplx f = a(i, k) / a(k, k);
            if (f == cplx(0.0)) continue;
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
            for (std::size_t j = 0; j < m; ++j) b(i, j) -= f * b(k, j);
        }
    }
    ComplexMatrix x(n, m);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t ii = n; ii-- > 0;) {
            cplx s = b(ii, j);
            for (std::size_t k = ii + 1; k < n; ++k) s -= a(ii, k) * x(k, j);
            x(ii, j) = s / a(ii, ii);
        }
    }
    return x;
}

UnitaryMatrix cayley(const SkewHermitianMatrix& a) {
    const std::size_t n = a.size();
    const ComplexMatrix id = ComplexMatrix::identity(n);
    return UnitaryMatrix(solve(id - a.matrix(), id + a.matrix()));
}

}  // namespace ot
