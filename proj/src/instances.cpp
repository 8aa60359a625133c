#include "ot/instances.hpp"

#include <cmath>
#include <numbers>

#include "ot/annulus.hpp"
#include "ot/errors.hpp"

namespace ot::instances {

RealMatrix uniform_cost(std::size_t rows, std::size_t cols, Rng& rng) {
    RealMatrix c(rows, cols);
    for (auto& v : c.data()) v = rng.uniform();
    return c;
}

HermitianMatrix hermitian(std::size_t n, Rng& rng, double scale) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = rng.uniform(-scale, scale);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double re = rng.uniform(-scale, scale);
            const double im = rng.uniform(-scale, scale);
            m(i, j) = cplx(re, im);
            m(j, i) = cplx(re, -im);
        }
    }
    return HermitianMatrix(std::move(m));
}

SkewHermitianMatrix skew_hermitian(std::size_t n, Rng& rng, double scale) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = cplx(0.0, rng.uniform(-scale, scale));
        for (std::size_t j = i + 1; j < n; ++j) {
            const double re = rng.uniform(-scale, scale);
            const double im = rng.uniform(-scale, scale);
            m(i, j) = cplx(re, im);
            m(j, i) = cplx(-re, im);
        }
    }
    return SkewHermitianMatrix(std::move(m));
}

UnitaryMatrix unitary(std::size_t n, Rng& rng, double spread) { return cayley(skew_hermitian(n, rng, spread)); }

DoublyStochasticMatrix doubly_stochastic(std::size_t n, std::size_t terms, Rng& rng) {
    if (terms == 0) throw InvariantError("doubly_stochastic: need at least one term");
    RealVector w(terms);
    double total = 0.0;
    for (auto& v : w) {
        v = 0.05 + rng.uniform();
        total += v;
    }
    RealMatrix m(n, n);
    for (std::size_t k = 0; k < terms; ++k) {
        const auto p = rng.permutation(n);
        for (std::size_t i = 0; i < n; ++i) m(i, p[i]) += w[k] / total;
    }
    return DoublyStochasticMatrix(std::move(m));
}

DoublyStochasticMatrix t_transform_product(std::size_t n, std::size_t count, Rng& rng) {
    RealMatrix m = RealMatrix::identity(n);
    if (n < 2) return DoublyStochasticMatrix(std::move(m));
    for (std::size_t c = 0; c < count; ++c) {
        const std::size_t i = rng.index(n);
        std::size_t j = rng.index(n - 1);
        if (j >= i) ++j;
        m = TTransform{i, j, rng.uniform()}.matrix(n) * m;
    }
    return DoublyStochasticMatrix(std::move(m));
}

RealVector uniform_vector(std::size_t n, Rng& rng, double lo, double hi) {
    RealVector v(n);
    for (auto& x : v) x = rng.uniform(lo, hi);
    return v;
}

RealVector separated_vector(std::size_t n, Rng& rng) {
    RealVector base(n);
    for (std::size_t k = 0; k < n; ++k) base[k] = static_cast<double>(k + 1) + rng.uniform(-0.25, 0.25);
    const auto p = rng.permutation(n);
    RealVector v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = base[p[k]];
    return v;
}

RealMatrix orbit_cost(std::span<const double> lambda, std::span<const double> n_diag) {
    if (lambda.size() != n_diag.size()) throw DimensionError("orbit_cost: length mismatch");
    RealMatrix c(lambda.size(), n_diag.size());
    for (std::size_t i = 0; i < lambda.size(); ++i)
        for (std::size_t j = 0; j < n_diag.size(); ++j) c(i, j) = lambda[i] * n_diag[j];
    return c;
}

GridFunction uniform_grid(std::size_t nz, std::size_t ntheta, Rng& rng, double lo, double hi) {
    GridFunction g(nz, ntheta);
    for (auto& v : g.values()) v = rng.uniform(lo, hi);
    return g;
}

GridFunction smooth_monotone_grid(std::size_t nz, std::size_t ntheta, Rng& rng, double amplitude) {
    GridFunction g(nz, ntheta);
    const double phase = rng.uniform();
    for (std::size_t i = 0; i < nz; ++i)
        for (std::size_t j = 0; j < ntheta; ++j) {
            const double z = g.z(i), th = g.theta(j);
            g(i, j) = z + amplitude * std::sin(2.0 * std::numbers::pi * (th + phase)) * std::sin(std::numbers::pi * z);
        }
    return g;
}

}  // namespace ot::instances
