#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "ot/annulus.hpp"
#include "ot/errors.hpp"
#include "ot/instances.hpp"
#include "ot/transport.hpp"

using namespace ot;

namespace {

constexpr double kPi = std::numbers::pi;

GridFunction from_rows(std::size_t nz, std::size_t nt, auto f) {
    GridFunction g(nz, nt);
    for (std::size_t i = 0; i < nz; ++i)
        for (std::size_t j = 0; j < nt; ++j) g(i, j) = f(g.z(i), g.theta(j));
    return g;
}

RealVector sorted_values(const GridFunction& g) {
    RealVector v(g.values().begin(), g.values().end());
    std::sort(v.begin(), v.end());
    return v;
}

double l1_distance(const GridFunction& a, const GridFunction& b) {
    double s = 0.0;
    for (std::size_t c = 0; c < a.cells(); ++c) s += std::abs(a.values()[c] - b.values()[c]);
    return s / static_cast<double>(a.cells());
}

}  // namespace

TEST_CASE("GridFunction: geometry and validation") {
    GridFunction g(4, 2, 1.5);
    CHECK(g.z(0) == 0.125);
    CHECK(g.theta(1) == 0.75);
    CHECK(g.cell_measure() == 0.125);
    CHECK(g.theta_independent());
    g(2, 1) = 3.0;
    CHECK_FALSE(g.theta_independent());
    CHECK_THROWS_AS(GridFunction(0, 3), DimensionError);
    CHECK_THROWS_AS(GridFunction(2, 2, RealVector{1, 2, 3}), DimensionError);
    CHECK_THROWS_AS(GridFunction(1, 1, RealVector{NAN}), InvariantError);
}

TEST_CASE("moments: constants, x = z, and pairwise summation oracle") {
    const auto m = moments(GridFunction(3, 5, 2.0), 4);
    CHECK(m == RealVector{2, 4, 8, 16});
    CHECK(moments(from_rows(4, 4, [](double z, double) { return z; }), 1)[0] == 0.5);

    Rng rng(3);
    const auto g = instances::uniform_grid(16, 16, rng, -1.0, 2.0);
    const auto mm = moments(g, 6);
    for (int p = 1; p <= 6; ++p) {
        RealVector pw(g.cells());
        for (std::size_t c = 0; c < g.cells(); ++c) pw[c] = std::pow(g.values()[c], p);
        const double ref = oracle::pairwise_sum(pw.data(), pw.size()) / static_cast<double>(g.cells());
        CHECK(std::abs(mm[static_cast<std::size_t>(p - 1)] - ref) <= 1e-13 * std::max(1.0, std::abs(ref)));
    }
    CHECK_THROWS_AS(moments(g, 0), InvariantError);
}

TEST_CASE("spectral_profile: monotone input, x = z, random multiset") {
    const auto dec = from_rows(4, 3, [](double z, double) { return 1.0 - z; });
    const auto p = spectral_profile(dec);
    CHECK(p.profile.segments() == 12);
    for (std::size_t k = 0; k < 12; ++k) CHECK(p.profile.values()[k] == dec.values()[k]);
    CHECK(p.psi.mapping() == CellMap::identity(12).mapping());

    const auto id = from_rows(8, 8, [](double z, double) { return z; });
    const auto pz = spectral_profile(id).profile;
    for (std::size_t k = 0; k < 64; ++k) CHECK(pz.values()[k] == (7.5 - static_cast<double>(k / 8)) / 8.0);

    Rng rng(4);
    const auto g = instances::uniform_grid(16, 16, rng);
    const auto s = spectral_profile(g);
    CHECK(s.profile.nonincreasing());
    RealVector pv = s.profile.values();
    std::sort(pv.begin(), pv.end());
    CHECK(pv == sorted_values(g));
    // x = lambda2 o psi
    const auto l2 = lambda2(s.profile, 16, 16);
    for (std::size_t c = 0; c < g.cells(); ++c) CHECK(g.values()[c] == l2.values()[s.psi[c]]);
    const auto ma = moments(g, 6), mb = moments(l2, 6);
    for (std::size_t p2 = 0; p2 < 6; ++p2) CHECK(std::abs(ma[p2] - mb[p2]) <= 1e-12 * std::abs(ma[p2]));
}

TEST_CASE("theta_average: theta-independent data and a full-period sine") {
    const auto g = from_rows(6, 10, [](double z, double) { return z * z; });
    const auto pi = theta_average(g);
    for (std::size_t i = 0; i < 6; ++i) CHECK(pi.values()[i] == doctest::Approx(g(i, 0)).epsilon(1e-15));

    const auto s = from_rows(6, 16, [](double z, double t) { return z + std::sin(2 * kPi * t); });
    const auto ps = theta_average(s);
    for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(ps.values()[i] - s.z(i)) <= 1e-14);

    Rng rng(5);
    const auto r = instances::uniform_grid(5, 7, rng);
    const auto pr = theta_average(r);
    for (std::size_t i = 0; i < 5; ++i) {
        double m = 0;
        for (std::size_t j = 0; j < 7; ++j) m += r(i, j) / 7.0;
        CHECK(pr.values()[i] == doctest::Approx(m).epsilon(1e-15));
    }
}

TEST_CASE("schur_check: theta-independent, constants, rearrangements, non-invertible maps") {
    const auto g = from_rows(8, 4, [](double z, double) { return std::cos(5 * z); });
    const auto c = schur_check(g);
    CHECK(c.holds);
    CHECK(std::abs(c.gaps.back()) <= 1e-12);

    const auto k = schur_check(GridFunction(4, 4, 0.3));
    CHECK(k.holds);
    for (double gap : k.gaps) CHECK(std::abs(gap) <= 1e-15);

    Rng rng(6);
    const auto base = spectral_profile(instances::uniform_grid(16, 16, rng)).profile;
    const auto l2 = lambda2(base, 16, 16);
    for (int trial = 0; trial < 30; ++trial) {
        const auto x = CellMap::random_bijection(256, rng).apply(l2);
        CHECK(schur_check(x).min_gap >= -1e-12);
        const auto y = CellMap::random_map(256, rng).apply(l2);
        CHECK(majorizes_step(spectral_profile(l2).profile, spectral_profile(y).profile, 1e-12).holds);
        CHECK(schur_check(y).holds);
    }
}

TEST_CASE("CellMap: validation and fiber averaging") {
    CHECK_THROWS_AS(CellMap({0, 0}, true), InvariantError);
    CHECK_THROWS_AS(CellMap({0, 2}, false), InvariantError);
    const CellMap m({1, 1, 0, 0}, false);
    const auto y = m.apply(GridFunction(2, 2, RealVector{1, 3, 5, 7}));
    CHECK(y.values()[0] == 2.0);
    CHECK(y.values()[1] == 2.0);
    CHECK(y.values()[2] == 6.0);
    CHECK(y.values()[3] == 6.0);
}

TEST_CASE("horn_lift: own z-blocks, constant target, random targets") {
    const auto g = from_rows(4, 4, [](double z, double) { return 1.0 - z; });
    const auto own = horn_lift(spectral_profile(g).profile, theta_average(g));
    CHECK(own.residual_l1 == 0.0);
    CHECK(own.x == g);

    Rng rng(7);
    const auto r = instances::uniform_grid(8, 8, rng);
    const auto prof = spectral_profile(r).profile;
    const auto flat = horn_lift(prof, StepFunction::uniform(RealVector(8, prof.integral())));
    const double range = prof.values().front() - prof.values().back();
    CHECK(flat.residual_l1 <= range / 8.0);
    CHECK(sorted_values(flat.x) == sorted_values(r));

    for (int trial = 0; trial < 20; ++trial) {
        const auto x = instances::uniform_grid(16, 16, rng);
        const auto profile = spectral_profile(x).profile;
        // A target majorized by the profile: theta-average of a random rearrangement.
        const auto target = theta_average(CellMap::random_bijection(256, rng).apply(x));
        const auto lift = horn_lift(profile, target);
        CHECK(lift.residual_l1 <= lift.bound);
        CHECK(sorted_values(lift.x) == sorted_values(x));
    }

    CHECK_THROWS_AS(horn_lift(StepFunction::uniform({1, 1, 1, 1}), StepFunction::uniform({2, 0})), MajorizationError);
}

TEST_CASE("monge_minimizer: fixed point, two-cell swap, assignment oracle") {
    const auto inc = from_rows(4, 3, [](double z, double) { return z; });
    const auto fixed = monge_minimizer(inc);
    CHECK(fixed.minimizer == inc);
    CHECK(fixed.cost == z_pairing_cost(inc));

    const auto two = monge_minimizer(GridFunction(2, 1, RealVector{5, 1}));
    CHECK(two.minimizer.values()[0] == 1.0);
    CHECK(two.minimizer.values()[1] == 5.0);
    CHECK(two.cost == -2.0);

    Rng rng(8);
    for (int trial = 0; trial < 5; ++trial) {
        const auto x = instances::uniform_grid(4, 4, rng);
        RealMatrix c(16, 16);
        for (std::size_t a = 0; a < 16; ++a)
            for (std::size_t b = 0; b < 16; ++b) c(a, b) = -x.values()[a] * x.z(b / 4) / 16.0;
        const auto assignment = solve_monge(CostMatrix(c));
        CHECK(monge_minimizer(x).cost == doctest::Approx(assignment.value).epsilon(1e-12));
        const auto m = MarginalVector::uniform(16);
        CHECK(16.0 * solve_kantorovich(CostMatrix(c), m, m).value == doctest::Approx(assignment.value).epsilon(1e-10));
    }
}

TEST_CASE("integrate_pde: theta-independent data is stationary") {
    const auto g = from_rows(8, 8, [](double z, double) { return z * z; });
    PdeOptions o;
    o.t_end = 0.01;
    const auto t = integrate_pde(g, o);
    CHECK(t.final_state == g);
    CHECK(t.steps == 100);
}

TEST_CASE("integrate_pde: monotone data aligns with z and conserves I1") {
    Rng rng(9);
    const auto x0 = instances::smooth_monotone_grid(32, 32, rng);
    PdeOptions o;
    o.step = 2e-4;
    o.t_end = 0.3;
    o.sample_every = 100;
    const auto t = integrate_pde(x0, o);
    CHECK_FALSE(t.shock_detected);
    CHECK(t.samples.back().t == 0.3);
    CHECK(t.samples.back().xtheta_norm <= 1e-3 * t.samples.front().xtheta_norm);
    for (const auto& s : t.samples) {
        CHECK(std::abs(s.moments[0] - t.samples.front().moments[0]) <= 1e-10);
        CHECK(std::abs(s.moments[1] - t.samples.front().moments[1]) <= 1e-3);
    }
    CHECK(l1_distance(t.final_state, monge_minimizer(x0).minimizer) <= 5e-2);

    o.scheme = BracketScheme::Arakawa;
    const auto a = integrate_pde(x0, o);
    CHECK(a.samples.back().xtheta_norm <= 1e-3 * a.samples.front().xtheta_norm);
}

TEST_CASE("integrate_pde: decreasing data is flagged as a shock") {
    const auto x0 = from_rows(64, 64, [](double z, double t) {
        return 1.0 - z + 0.05 * std::sin(2 * kPi * t) * std::sin(kPi * z);
    });
    PdeOptions o;
    o.t_end = 0.1;
    bool flagged = false;
    try {
        flagged = integrate_pde(x0, o).shock_detected;
    } catch (const BlowupError&) {
        flagged = true;
    }
    CHECK(flagged);
    CHECK_THROWS_AS(integrate_pde(GridFunction(4, 8), o), DimensionError);
}

TEST_CASE("advect_density: zero, identity, first-order convergence") {
    const auto zero = advect_density(StepFunction::uniform(RealVector(16, 0.0)), 1.0 / 32, 0.5);
    for (double v : zero.values()) CHECK(v == 0.0);
    const auto r0 = StepFunction::uniform({1, 2, 3});
    CHECK(advect_density(r0, 0.1, 0.0).values() == r0.values());
    CHECK_THROWS_AS(advect_density(r0, 0.5, 1.0), InvariantError);

    auto bump = [](double z) { return std::exp(-std::pow((z - 0.3) / 0.08, 2)); };
    auto error = [&](std::size_t m) {
        RealVector v(m);
        const double dz = 1.0 / static_cast<double>(m);
        for (std::size_t i = 0; i < m; ++i) v[i] = bump((static_cast<double>(i) + 0.5) * dz);
        const auto out = advect_density(StepFunction::uniform(v), 0.5 * dz, 0.25);
        double e = 0.0;
        for (std::size_t i = 0; i < m; ++i) e += std::abs(out.values()[i] - bump((static_cast<double>(i) + 0.5) * dz - 0.25)) * dz;
        return e;
    };
    const double ratio = error(128) / error(256);
    CHECK(ratio >= 1.5);
    CHECK(ratio <= 2.5);
}

TEST_CASE("annulus_dual: constants, the linear profile, rearrangements") {
    const auto c = annulus_dual(StepFunction::uniform({2, 2}), StepFunction::uniform({2, 2}));
    CHECK(c.d_value == -1.0);
    CHECK(c.k_value == -1.0);
    CHECK(c.gap == 0.0);

    for (std::size_t n : {8u, 32u, 128u}) {
        RealVector v(n);
        for (std::size_t k = 0; k < n; ++k) v[k] = 1.0 - (static_cast<double>(k) + 0.5) / static_cast<double>(n);
        const auto lam = StepFunction::uniform(v);
        const auto d = annulus_dual(lam, lam);
        // Exact pairing of the midpoint values with the segment moments.
        double oracle_d = 0.0;
        for (std::size_t k = 0; k < n; ++k) oracle_d -= v[k] * (2.0 * static_cast<double>(k) + 1.0) / (2.0 * n * n);
        CHECK(d.d_value == doctest::Approx(oracle_d).epsilon(1e-13));
        CHECK(std::abs(d.d_value + 1.0 / 6.0) <= 1.0 / (n * n));
        CHECK(std::abs(d.gap) <= 1e-10);
    }

    Rng rng(10);
    const RealVector vals = instances::uniform_vector(20, rng);
    const auto profile = StepFunction::uniform(vals);
    const auto lam = rearrangement_step(profile);
    for (int trial = 0; trial < 20; ++trial) {
        const auto perm = rng.permutation(20);
        RealVector shuffled(20);
        for (std::size_t k = 0; k < 20; ++k) shuffled[k] = vals[perm[k]];
        const auto d = annulus_dual(profile, StepFunction::uniform(shuffled));
        CHECK(d.weak_duality);
        CHECK(d.d_value <= -lam.first_moment_z() + 1e-12);
        CHECK(d.k_min <= d.d_value + 1e-12);
    }
    CHECK_THROWS_AS(annulus_dual(profile, StepFunction::uniform({1, 2})), InvariantError);
}

TEST_CASE("w2_distance: identical, two bumps, quantile coupling oracle") {
    const auto f = StepFunction::uniform({1, 3, 0, 2});
    CHECK(w2_distance(f, f) == doctest::Approx(0.0).epsilon(1e-14));

    auto bump_at = [](double center) {
        RealVector v(100, 0.0);
        v[static_cast<std::size_t>(center * 100)] = 100.0;
        return StepFunction::uniform(v);
    };
    CHECK(w2_distance(bump_at(0.2), bump_at(0.7), 4) == doctest::Approx(0.125).epsilon(1e-9));

    Rng rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        RealVector a = instances::uniform_vector(12, rng, 0.0, 1.0), b = instances::uniform_vector(9, rng, 0.0, 1.0);
        double ta = 0, tb = 0;
        for (double x : a) ta += x / 12.0;
        for (double x : b) tb += x / 9.0;
        for (double& x : b) x *= ta / tb;
        const auto fa = StepFunction::uniform(a), fb = StepFunction::uniform(b);
        std::vector<std::pair<double, double>> sa, sb;
        for (const auto& at : density_atoms(fa, 3)) sa.emplace_back(at.position, at.mass);
        for (const auto& at : density_atoms(fb, 3)) sb.emplace_back(at.position, at.mass);
        const double ref = oracle::monotone_coupling_cost(sa, sb, [](double x, double y) { return 0.5 * (x - y) * (x - y); });
        CHECK(std::abs(w2_distance(fa, fb, 3) - ref) <= 1e-6 * ref);
    }
    CHECK_THROWS_AS(w2_distance(StepFunction::uniform({1}), StepFunction::uniform({2})), BalanceError);
}
