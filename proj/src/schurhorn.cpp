#include "ot/schurhorn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ot/errors.hpp"

namespace ot {

SchurProjection schur_projection(const HermitianMatrix& a) {
    const auto es = jacobi_eigh(a);
    RealVector diag = a.diagonal();
    DoublyStochasticMatrix witness(abs_squared(es.vectors.matrix()), 1e-9);
    auto cert = majorizes(es.values, diag, 1e-9);
    return SchurProjection{std::move(diag), es.values, std::move(witness), std::move(cert)};
}

namespace {

// A <- R^T A R for the plane rotation R_pp = R_qq = c, R_qp = s, R_pq = -s.
void rotate(RealMatrix& a, std::size_t p, std::size_t q, double c, double s) {
    const std::size_t n = a.rows();
    for (std::size_t k = 0; k < n; ++k) {
        const double akp = a(k, p), akq = a(k, q);
        a(k, p) = c * akp + s * akq;
        a(k, q) = -s * akp + c * akq;
    }
    for (std::size_t k = 0; k < n; ++k) {
        const double apk = a(p, k), aqk = a(q, k);
        a(p, k) = c * apk + s * aqk;
        a(q, k) = -s * apk + c * aqk;
    }
    for (std::size_t k = 0; k < n; ++k) {
        const double avg_p = 0.5 * (a(p, k) + a(k, p));
        a(p, k) = a(k, p) = avg_p;
        const double avg_q = 0.5 * (a(q, k) + a(k, q));
        a(q, k) = a(k, q) = avg_q;
    }
}

}  // namespace

HermitianMatrix horn_construct(std::span<const double> spectrum, std::span<const double> target_diag, double tol) {
    if (spectrum.size() != target_diag.size() || spectrum.empty())
        throw DimensionError("horn_construct: spectrum and diagonal lengths differ");
    const auto cert = majorizes(spectrum, target_diag, tol);
    if (!cert.holds) throw MajorizationError("horn_construct: spectrum does not majorize the diagonal", cert.failing_prefix);

    const std::size_t n = spectrum.size();
    const RealVector lam = decreasing_rearrangement(spectrum);
    const auto target_order = decreasing_order(target_diag);

    RealMatrix a = RealMatrix::diagonal(std::span<const double>(lam));
    std::vector<std::size_t> active(n);
    std::iota(active.begin(), active.end(), std::size_t{0});
    std::vector<std::size_t> slot(n);  // matrix index -> caller's diagonal position

    // Pin the largest remaining target each round. With the active diagonal
    // sorted, rotating the adjacent pair that brackets the target keeps the
    // remaining diagonal sorted and still majorizing the remaining targets.
    for (std::size_t t = 0; t + 1 < n; ++t) {
        const double d = target_diag[target_order[t]];
        std::size_t k = 0;
        while (k + 1 < active.size() && a(active[k + 1], active[k + 1]) >= d) ++k;
        if (k + 1 == active.size()) --k;
        const std::size_t p = active[k], q = active[k + 1];
        const double alpha = a(p, p), beta = a(q, q);
        if (alpha - beta > 0.0) {
            const double c2 = std::clamp((d - beta) / (alpha - beta), 0.0, 1.0);
            rotate(a, p, q, std::sqrt(c2), std::sqrt(1.0 - c2));
        }
        slot[p] = target_order[t];
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(k));
        std::stable_sort(active.begin(), active.end(), [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });
    }
    slot[active.front()] = target_order[n - 1];

    ComplexMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(slot[i], slot[j]) = a(i, j);
    return HermitianMatrix(std::move(out));
}

bool permutohedron_contains(std::span<const double> point, std::span<const double> y, double tol) {
    return majorizes(y, point, tol).holds;
}

}  // namespace ot
