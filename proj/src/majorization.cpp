#include "ot/majorization.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ot/errors.hpp"

namespace ot {

PermutationMap::PermutationMap(std::vector<std::size_t> mapping) : map_(std::move(mapping)) {
    std::vector<bool> seen(map_.size(), false);
    for (std::size_t v : map_) {
        if (v >= map_.size() || seen[v]) throw InvariantError("PermutationMap: not a bijection");
        seen[v] = true;
    }
}

PermutationMap PermutationMap::identity(std::size_t n) {
    std::vector<std::size_t> m(n);
    std::iota(m.begin(), m.end(), std::size_t{0});
    return PermutationMap(std::move(m));
}

PermutationMap PermutationMap::inverse() const {
    std::vector<std::size_t> inv(map_.size());
    for (std::size_t i = 0; i < map_.size(); ++i) inv[map_[i]] = i;
    return PermutationMap(std::move(inv));
}

RealMatrix PermutationMap::matrix() const {
    RealMatrix m(size(), size());
    for (std::size_t i = 0; i < size(); ++i) m(i, map_[i]) = 1.0;
    return m;
}

RealVector PermutationMap::apply(std::span<const double> y) const {
    if (y.size() != size()) throw DimensionError("PermutationMap::apply: length mismatch");
    RealVector out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = y[map_[i]];
    return out;
}

DoublyStochasticMatrix::DoublyStochasticMatrix(RealMatrix m, double tol) : m_(std::move(m)) {
    if (!m_.square() || m_.rows() == 0) throw DimensionError("DoublyStochasticMatrix: not square");
    if (!m_.all_finite()) throw InvariantError("DoublyStochasticMatrix: non-finite entry");
    for (double v : m_.data())
        if (v < -1e-12) throw InvariantError("DoublyStochasticMatrix: negative entry");
    if (!is_doubly_stochastic(m_, tol)) throw InvariantError("DoublyStochasticMatrix: row or column sum differs from 1");
}

DoublyStochasticMatrix DoublyStochasticMatrix::identity(std::size_t n) {
    return DoublyStochasticMatrix(RealMatrix::identity(n));
}

DoublyStochasticMatrix DoublyStochasticMatrix::from_permutation(const PermutationMap& p) {
    return DoublyStochasticMatrix(p.matrix());
}

RealVector DoublyStochasticMatrix::apply(std::span<const double> y) const { return m_ * y; }

bool is_doubly_stochastic(const RealMatrix& m, double tol) {
    if (!m.square()) return false;
    const std::size_t n = m.rows();
    const RealVector e(n, 1.0);
    const RealVector pe = m * e;                 // P e
    const RealVector ep = m.transpose() * e;     // (e' P)'
    for (double v : m.data())
        if (!(v >= -tol)) return false;
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(pe[i] - 1.0) > tol || std::abs(ep[i] - 1.0) > tol) return false;
    return true;
}

std::vector<std::size_t> decreasing_order(std::span<const double> x) {
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] > x[b]; });
    return order;
}

RealVector decreasing_rearrangement(std::span<const double> x) {
    RealVector s(x.begin(), x.end());
    std::stable_sort(s.begin(), s.end(), std::greater<>());
    return s;
}

MajorizationCertificate majorizes(std::span<const double> y, std::span<const double> x, double tol) {
    if (x.size() != y.size()) throw DimensionError("majorizes: length mismatch");
    const RealVector xs = decreasing_rearrangement(x);
    const RealVector ys = decreasing_rearrangement(y);
    const std::size_t n = xs.size();
    MajorizationCertificate cert;
    cert.gaps.resize(n);
    double sx = 0.0, sy = 0.0;
    cert.holds = true;
    for (std::size_t k = 0; k < n; ++k) {
        sx += xs[k];
        sy += ys[k];
        cert.gaps[k] = sy - sx;
        const bool ok = (k + 1 < n) ? cert.gaps[k] >= -tol : std::abs(cert.gaps[k]) <= tol;
        if (!ok && cert.holds) {
            cert.holds = false;
            cert.failing_prefix = k + 1;
        }
    }
    return cert;
}

RealMatrix TTransform::matrix(std::size_t n) const {
    RealMatrix m = RealMatrix::identity(n);
    m(i, i) = t;
    m(j, j) = t;
    m(i, j) = 1.0 - t;
    m(j, i) = 1.0 - t;
    return m;
}

void TTransform::apply_in_place(std::span<double> z) const {
    const double zi = z[i], zj = z[j];
    z[i] = t * zi + (1.0 - t) * zj;
    z[j] = t * zj + (1.0 - t) * zi;
}

RealMatrix TTransformChain::matrix() const {
    RealMatrix p = alignment.matrix();
    for (const auto& step : steps) p = step.matrix(n) * p;
    return p;
}

DoublyStochasticMatrix TTransformChain::doubly_stochastic() const { return DoublyStochasticMatrix(matrix(), 1e-9); }

RealVector TTransformChain::apply(std::span<const double> y) const {
    RealVector z = alignment.apply(y);
    for (const auto& step : steps) step.apply_in_place(z);
    return z;
}

TTransformChain t_transform_chain(std::span<const double> x, std::span<const double> y, double tol) {
    const auto cert = majorizes(y, x, tol);
    if (!cert.holds) throw MajorizationError("t_transform_chain: y does not majorize x", cert.failing_prefix);
    const std::size_t n = x.size();

    const auto ox = decreasing_order(x);
    const auto oy = decreasing_order(y);
    std::vector<std::size_t> align(n);
    for (std::size_t k = 0; k < n; ++k) align[ox[k]] = oy[k];

    TTransformChain chain;
    chain.n = n;
    chain.alignment = PermutationMap(std::move(align));

    // Work on the sorted views; position k lives at coordinate ox[k].
    RealVector xs(n), zs(n);
    for (std::size_t k = 0; k < n; ++k) {
        xs[k] = x[ox[k]];
        zs[k] = y[oy[k]];
    }
    for (std::size_t iter = 0; iter < n; ++iter) {
        std::size_t j = n;
        for (std::size_t k = n; k-- > 0;)
            if (zs[k] - xs[k] > tol) {
                j = k;
                break;
            }
        if (j == n) break;
        std::size_t k = n;
        for (std::size_t m = j + 1; m < n; ++m)
            if (xs[m] - zs[m] > tol) {
                k = m;
                break;
            }
        if (k == n) break;
        const double excess = zs[j] - xs[j];
        const double deficit = xs[k] - zs[k];
        const double delta = std::min(excess, deficit);
        const double t = 1.0 - delta / (zs[j] - zs[k]);
        chain.steps.push_back(TTransform{ox[j], ox[k], t});
        const double zj = zs[j], zk = zs[k];
        zs[j] = t * zj + (1.0 - t) * zk;
        zs[k] = t * zk + (1.0 - t) * zj;
        if (excess <= deficit) zs[j] = xs[j];
        if (deficit <= excess) zs[k] = xs[k];
    }
    return chain;
}

}  // namespace ot
