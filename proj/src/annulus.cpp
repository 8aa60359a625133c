#include "ot/annulus.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ot/errors.hpp"
#include "ot/transport.hpp"

namespace ot {

GridFunction::GridFunction(std::size_t nz, std::size_t ntheta, double fill)
    : GridFunction(nz, ntheta, RealVector(nz * ntheta, fill)) {}

GridFunction::GridFunction(std::size_t nz, std::size_t ntheta, RealVector values)
    : nz_(nz), ntheta_(ntheta), values_(std::move(values)) {
    if (nz_ == 0 || ntheta_ == 0) throw DimensionError("GridFunction: empty grid");
    if (values_.size() != nz_ * ntheta_) throw DimensionError("GridFunction: value count does not match nz * ntheta");
    if (!all_finite()) throw InvariantError("GridFunction: non-finite value");
}

bool GridFunction::all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

bool GridFunction::theta_independent() const noexcept {
    for (std::size_t i = 0; i < nz_; ++i)
        for (std::size_t j = 1; j < ntheta_; ++j)
            if ((*this)(i, j) != (*this)(i, 0)) return false;
    return true;
}

CellMap::CellMap(std::vector<std::size_t> mapping, bool invertible) : map_(std::move(mapping)), invertible_(invertible) {
    if (map_.empty()) throw DimensionError("CellMap: empty");
    std::vector<char> hit(map_.size(), 0);
    for (std::size_t c : map_) {
        if (c >= map_.size()) throw InvariantError("CellMap: target cell out of range");
        if (invertible_ && hit[c]) throw InvariantError("CellMap: flagged invertible but not a bijection");
        hit[c] = 1;
    }
}

CellMap CellMap::identity(std::size_t cells) {
    std::vector<std::size_t> m(cells);
    std::iota(m.begin(), m.end(), std::size_t{0});
    return CellMap(std::move(m), true);
}

CellMap CellMap::random_bijection(std::size_t cells, Rng& rng) { return CellMap(rng.permutation(cells), true); }

CellMap CellMap::random_map(std::size_t cells, Rng& rng) {
    std::vector<std::size_t> m(cells);
    for (auto& c : m) c = rng.index(cells);
    return CellMap(std::move(m), false);
}

GridFunction CellMap::apply(const GridFunction& x) const {
    if (x.cells() != map_.size()) throw DimensionError("CellMap::apply: grid size mismatch");
    const auto xv = x.values();
    RealVector out(map_.size());
    if (invertible_) {
        for (std::size_t c = 0; c < map_.size(); ++c) out[c] = xv[map_[c]];
    } else {
        RealVector sum(map_.size(), 0.0);
        std::vector<std::size_t> count(map_.size(), 0);
        for (std::size_t c = 0; c < map_.size(); ++c) {
            sum[map_[c]] += xv[c];
            ++count[map_[c]];
        }
        for (std::size_t c = 0; c < map_.size(); ++c) out[c] = sum[map_[c]] / static_cast<double>(count[map_[c]]);
    }
    return GridFunction(x.nz(), x.ntheta(), std::move(out));
}

RealVector moments(const GridFunction& x, int p_max) {
    if (p_max < 1) throw InvariantError("moments: p_max must be >= 1");
    RealVector sums(static_cast<std::size_t>(p_max), 0.0);
    for (double v : x.values()) {
        double power = 1.0;
        for (int p = 0; p < p_max; ++p) {
            power *= v;
            sums[static_cast<std::size_t>(p)] += power;
        }
    }
    for (double& s : sums) s /= static_cast<double>(x.cells());
    return sums;
}

SpectralDecomposition spectral_profile(const GridFunction& x) {
    const auto order = decreasing_order(x.values());
    RealVector sorted(order.size());
    std::vector<std::size_t> rank(order.size());
    for (std::size_t r = 0; r < order.size(); ++r) {
        sorted[r] = x.values()[order[r]];
        rank[order[r]] = r;
    }
    return SpectralDecomposition{StepFunction::uniform(std::move(sorted)), CellMap(std::move(rank), true)};
}

GridFunction lambda2(const StepFunction& profile, std::size_t nz, std::size_t ntheta) {
    GridFunction g(nz, ntheta);
    const double n = static_cast<double>(g.cells());
    for (std::size_t k = 0; k < g.cells(); ++k) g.values()[k] = profile((static_cast<double>(k) + 0.5) / n);
    return g;
}

StepFunction theta_average(const GridFunction& x) {
    RealVector means(x.nz(), 0.0);
    for (std::size_t i = 0; i < x.nz(); ++i) {
        for (std::size_t j = 0; j < x.ntheta(); ++j) means[i] += x(i, j);
        means[i] /= static_cast<double>(x.ntheta());
    }
    return StepFunction::uniform(std::move(means));
}

StepMajorizationCertificate schur_check(const GridFunction& x, double tol) {
    return majorizes_step(spectral_profile(x).profile, theta_average(x), tol);
}

namespace {

/// Mean of f over [a, b].
double interval_mean(const StepFunction& f, double a, double b) {
    const auto& br = f.breakpoints();
    double s = 0.0;
    for (std::size_t k = 0; k < f.segments(); ++k) {
        const double lo = std::max(a, br[k]), hi = std::min(b, br[k + 1]);
        if (hi > lo) s += f.values()[k] * (hi - lo);
    }
    return s / (b - a);
}

bool equal_segments(const StepFunction& f) {
    const double len = 1.0 / static_cast<double>(f.segments());
    for (std::size_t k = 0; k < f.segments(); ++k)
        if (std::abs(f.length(k) - len) > 1e-12) return false;
    return true;
}

}  // namespace

HornLift horn_lift(const StepFunction& profile, const StepFunction& target, double tol) {
    const std::size_t nz = target.segments();
    const std::size_t cells = profile.segments();
    if (!equal_segments(profile)) throw InvariantError("horn_lift: profile segments must have equal length");
    if (cells % nz != 0) throw DimensionError("horn_lift: profile segment count is not a multiple of the row count");
    const std::size_t nt = cells / nz;
    const auto cert = majorizes_step(profile, target, tol);
    if (!cert.holds) {
        std::size_t k = 0;
        while (k < cert.gaps.size() && cert.gaps[k] >= -tol) ++k;
        throw MajorizationError("horn_lift: profile does not majorize the target", k + 1);
    }

    RealVector need(nz);  // row sums to reach
    for (std::size_t i = 0; i < nz; ++i)
        need[i] = static_cast<double>(nt) *
                  interval_mean(target, static_cast<double>(i) / static_cast<double>(nz),
                                static_cast<double>(i + 1) / static_cast<double>(nz));
    const RealVector values = decreasing_rearrangement(profile.values());

    // Water-filling: each value, largest first, goes to the row whose remaining
    // need per free slot is largest.
    std::vector<std::vector<double>> rows(nz);
    RealVector sum(nz, 0.0);
    for (double v : values) {
        std::size_t best = nz;
        double best_rate = 0.0;
        for (std::size_t i = 0; i < nz; ++i) {
            const std::size_t free = nt - rows[i].size();
            if (free == 0) continue;
            const double rate = (need[i] - sum[i]) / static_cast<double>(free);
            if (best == nz || rate > best_rate) {
                best = i;
                best_rate = rate;
            }
        }
        rows[best].push_back(v);
        sum[best] += v;
    }

    // Pair swaps between rows while they reduce the total row error.
    const double eps = 1e-15 * (std::abs(values.front()) + std::abs(values.back()) + 1.0);
    for (int pass = 0; pass < 100; ++pass) {
        bool improved = false;
        for (std::size_t a = 0; a < nz; ++a)
            for (std::size_t b = a + 1; b < nz; ++b) {
                const double ea = sum[a] - need[a], eb = sum[b] - need[b];
                const double before = std::abs(ea) + std::abs(eb);
                if (before <= eps) continue;
                double best_after = before - eps;
                std::size_t best_p = nt, best_q = nt;
                for (std::size_t p = 0; p < nt; ++p)
                    for (std::size_t q = 0; q < nt; ++q) {
                        const double d = rows[a][p] - rows[b][q];
                        const double after = std::abs(ea - d) + std::abs(eb + d);
                        if (after < best_after) {
                            best_after = after;
                            best_p = p;
                            best_q = q;
                        }
                    }
                if (best_p == nt) continue;
                const double d = rows[a][best_p] - rows[b][best_q];
                std::swap(rows[a][best_p], rows[b][best_q]);
                sum[a] -= d;
                sum[b] += d;
                improved = true;
            }
        if (!improved) break;
    }

    GridFunction x(nz, nt);
    double residual = 0.0;
    for (std::size_t i = 0; i < nz; ++i) {
        std::sort(rows[i].begin(), rows[i].end(), std::greater<>());
        for (std::size_t j = 0; j < nt; ++j) x(i, j) = rows[i][j];
        residual += std::abs(sum[i] - need[i]) / static_cast<double>(nt * nz);
    }
    const double bound = 2.0 * (values.front() - values.back()) / static_cast<double>(nt);
    if (residual > bound) throw ConvergenceError("horn_lift: row averages not within the discretization bound", residual);
    return HornLift{std::move(x), residual, bound};
}

double z_pairing_cost(const GridFunction& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.nz(); ++i) {
        const double z = x.z(i);
        for (std::size_t j = 0; j < x.ntheta(); ++j) s += x(i, j) * z;
    }
    return -s / static_cast<double>(x.cells());
}

MongeMinimizer monge_minimizer(const GridFunction& x) {
    RealVector v(x.values().begin(), x.values().end());
    std::sort(v.begin(), v.end());
    GridFunction m(x.nz(), x.ntheta(), std::move(v));
    const double cost = z_pairing_cost(m);
    return MongeMinimizer{std::move(m), cost};
}

StepFunction advect_density(const StepFunction& rho0, double step, double t_end) {
    if (!(t_end >= 0.0)) throw InvariantError("advect_density: t_end must be >= 0");
    if (!equal_segments(rho0)) throw InvariantError("advect_density: segments must have equal length");
    const std::size_t m = rho0.segments();
    const double dz = 1.0 / static_cast<double>(m);
    if (!(step > 0.0) || step > dz * (1.0 + 1e-12)) throw InvariantError("advect_density: step violates the CFL limit");
    RealVector rho = rho0.values();
    if (t_end == 0.0) return StepFunction::uniform(std::move(rho));
    const auto steps = static_cast<std::size_t>(std::ceil(t_end / step - 1e-12));
    const double courant = (t_end / static_cast<double>(steps)) / dz;
    RealVector next(m);
    for (std::size_t s = 0; s < steps; ++s) {
        for (std::size_t i = 0; i < m; ++i) {
            const double upstream = (i == 0) ? 0.0 : rho[i - 1];
            next[i] = rho[i] - courant * (rho[i] - upstream);
        }
        rho.swap(next);
    }
    return StepFunction::uniform(std::move(rho));
}

AnnulusDual annulus_dual(const StepFunction& profile, const StepFunction& alpha, double tol) {
    const StepFunction lam = rearrangement_step(profile);
    const StepFunction alpha_star = rearrangement_step(alpha);
    // Same distribution: the decreasing rearrangements agree everywhere.
    RealVector pts;
    pts.insert(pts.end(), lam.breakpoints().begin(), lam.breakpoints().end());
    pts.insert(pts.end(), alpha_star.breakpoints().begin(), alpha_star.breakpoints().end());
    std::sort(pts.begin(), pts.end());
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        if (pts[k + 1] - pts[k] <= 1e-12) continue;
        const double mid = 0.5 * (pts[k] + pts[k + 1]);
        if (std::abs(lam(mid) - alpha_star(mid)) > tol)
            throw InvariantError("annulus_dual: alpha is not a rearrangement of the profile");
    }
    AnnulusDual out{alpha};
    out.d_value = -alpha.first_moment_z();
    out.k_value = -lam.first_moment_z();
    out.k_min = -(lam.integral() - lam.first_moment_z());
    out.gap = out.k_value - out.d_value;
    out.weak_duality = out.d_value <= out.k_value + 1e-10;
    return out;
}

std::vector<Atom> density_atoms(const StepFunction& density, std::size_t per_segment) {
    if (per_segment == 0) throw InvariantError("density_atoms: need at least one atom per segment");
    std::vector<Atom> atoms;
    atoms.reserve(density.segments() * per_segment);
    const double p = static_cast<double>(per_segment);
    for (std::size_t k = 0; k < density.segments(); ++k) {
        const double v = density.values()[k];
        if (v < 0.0) throw InvariantError("density_atoms: negative density");
        const double len = density.length(k);
        for (std::size_t q = 0; q < per_segment; ++q)
            atoms.push_back(Atom{density.breakpoints()[k] + (static_cast<double>(q) + 0.5) * len / p, v * len / p});
    }
    return atoms;
}

double w2_distance(const StepFunction& f_plus, const StepFunction& f_minus, std::size_t atoms_per_segment) {
    const auto a = density_atoms(f_plus, atoms_per_segment);
    const auto b = density_atoms(f_minus, atoms_per_segment);
    RealVector ma(a.size()), mb(b.size());
    for (std::size_t i = 0; i < a.size(); ++i) ma[i] = a[i].mass;
    for (std::size_t j = 0; j < b.size(); ++j) mb[j] = b[j].mass;
    const double ta = std::accumulate(ma.begin(), ma.end(), 0.0), tb = std::accumulate(mb.begin(), mb.end(), 0.0);
    if (std::abs(ta - tb) > 1e-9) throw BalanceError("w2_distance: densities carry different mass", ta - tb);
    RealMatrix c(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) {
            const double d = a[i].position - b[j].position;
            c(i, j) = 0.5 * d * d;
        }
    return solve_kantorovich(CostMatrix(std::move(c)), MarginalVector(std::move(ma)), MarginalVector(std::move(mb))).value;
}

}  // namespace ot
