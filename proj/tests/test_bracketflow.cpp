#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "ot/bracketflow.hpp"
#include "ot/errors.hpp"
#include "ot/instances.hpp"
#include "ot/schurhorn.hpp"

using namespace ot;

namespace {

constexpr cplx kI{0.0, 1.0};

SkewHermitianMatrix idiag(const RealVector& d) { return SkewHermitianMatrix::imaginary_diagonal(d); }

/// Diagonal of L / i.
RealVector diag_over_i(const SkewHermitianMatrix& l) {
    RealVector d(l.size());
    for (std::size_t k = 0; k < l.size(); ++k) d[k] = l.matrix()(k, k).imag();
    return d;
}

double offdiag_max(const ComplexMatrix& m) {
    double r = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (i != j) r = std::max(r, std::abs(m(i, j)));
    return r;
}

}  // namespace

TEST_CASE("double_bracket_rhs: commuting pair, 2x2 hand expansion, skewness") {
    CHECK(double_bracket_rhs(idiag({1, 2}), idiag({3, 5})).matrix().max_abs() == 0.0);

    // L = i [[0,1],[1,0]], N = i diag(1,2): [L,N] = [[0,-1],[1,0]], [L,[L,N]] = i [[2,0],[0,-2]].
    const SkewHermitianMatrix l(ComplexMatrix{{0.0, kI}, {kI, 0.0}});
    const auto c = commutator(l, idiag({1, 2}));
    CHECK(c.matrix()(0, 1) == cplx(-1, 0));
    CHECK(c.matrix()(1, 0) == cplx(1, 0));
    const auto r = double_bracket_rhs(l, idiag({1, 2}));
    CHECK(r.matrix()(0, 0) == cplx(0, 2));
    CHECK(r.matrix()(1, 1) == cplx(0, -2));
    CHECK(r.matrix()(0, 1) == cplx(0, 0));

    Rng rng(2);
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = instances::skew_hermitian(5, rng), b = instances::skew_hermitian(5, rng);
        CHECK(skew_hermitian_residual(double_bracket_rhs(a, b).matrix()) <= 1e-12);
    }
    CHECK_THROWS_AS(double_bracket_rhs(idiag({1}), idiag({1, 2})), DimensionError);
}

TEST_CASE("integrate_flow: commuting start is stationary") {
    FlowOptions opt;
    opt.t_end = 1.0;
    const auto t = integrate_flow(idiag({3, 1, 2}), idiag({1, 2, 3}), opt);
    CHECK(t.converged);
    CHECK(t.steps == 0);
    REQUIRE(t.samples.size() == 1);
    CHECK(t.samples[0].comm_norm == 0.0);
}

TEST_CASE("integrate_flow: finite difference of Tr(LN) is direction * |[L,N]|^2") {
    Rng rng(31);
    for (int direction : {1, -1}) {
        const auto start = OrbitState::from_spectrum(RealVector{3, 1, 2}, instances::unitary(3, rng));
        const auto n = idiag({1, 2, 3});
        FlowOptions opt;
        opt.direction = direction;
        opt.step = 1e-6;
        opt.t_end = 1e-6;
        const auto t = integrate_flow(start, n, opt);
        REQUIRE(t.samples.size() == 2);
        const double fd = (t.samples[1].trace_ln - t.samples[0].trace_ln) / 1e-6;
        const double c2 = t.samples[0].comm_norm * t.samples[0].comm_norm;
        CHECK(std::abs(fd - direction * c2) <= 1e-3 * c2);
    }
}

TEST_CASE("integrate_flow: isospectral, monotone, and limit similarly ordered with align_direction") {
    Rng rng(44);
    const RealVector lambda{3, 1, 2}, nd{1, 2, 3};
    const int dir = align_direction(lambda, nd);
    CHECK(dir == -1);
    const auto start = OrbitState::from_spectrum(lambda, instances::unitary(3, rng));
    FlowOptions opt;
    opt.direction = dir;
    opt.step = 0.02;
    opt.t_end = 200.0;
    opt.sample_every = 10;
    const auto t = integrate_flow(start, idiag(nd), opt);
    CHECK(t.converged);
    for (std::size_t k = 1; k < t.samples.size(); ++k) {
        CHECK(t.samples[k].t > t.samples[k - 1].t);
        CHECK(t.samples[k].trace_ln <= t.samples[k - 1].trace_ln + 1e-12);
        CHECK(t.samples[k].spec_drift <= 1e-10);
    }
    const auto& l = t.final_state.L.matrix();
    CHECK(offdiag_max(l) <= 1e-6);
    CHECK(max_abs_diff(diag_over_i(t.final_state.L), RealVector{1, 2, 3}) <= 1e-6);
    CHECK(t.final_state.frame_residual() <= 1e-9);

    // The limit diagonal lies in the permutohedron of the spectrum.
    const auto proj = schur_projection(t.final_state.L.divided_by_i());
    CHECK(permutohedron_contains(proj.diagonal, lambda));
}

TEST_CASE("integrate_flow: reversed n reverses the limit ordering") {
    Rng rng(45);
    const RealVector lambda{3, 1, 2}, nd{3, 2, 1};
    FlowOptions opt;
    opt.direction = align_direction(lambda, nd);
    opt.step = 0.02;
    opt.t_end = 200.0;
    opt.sample_every = 100;
    const auto t = integrate_flow(OrbitState::from_spectrum(lambda, instances::unitary(3, rng)), idiag(nd), opt);
    CHECK(max_abs_diff(diag_over_i(t.final_state.L), RealVector{3, 2, 1}) <= 1e-6);
}

TEST_CASE("integrate_flow: the opposite sign sorts the other way") {
    Rng rng(46);
    FlowOptions opt;
    opt.direction = 1;
    opt.step = 0.02;
    opt.t_end = 200.0;
    opt.sample_every = 100;
    const auto t = integrate_flow(OrbitState::from_spectrum(RealVector{3, 1, 2}, instances::unitary(3, rng)),
                                  idiag({1, 2, 3}), opt);
    CHECK(max_abs_diff(diag_over_i(t.final_state.L), RealVector{3, 2, 1}) <= 1e-6);
}

TEST_CASE("integrate_flow: options are validated") {
    FlowOptions opt;
    opt.direction = 0;
    CHECK_THROWS_AS(integrate_flow(idiag({1, 2}), idiag({2, 1}), opt), InvariantError);
}

TEST_CASE("align_direction: degeneracy and aligned diagonal start") {
    CHECK_THROWS_AS(align_direction(RealVector{1, 1}, RealVector{1, 2}), DegeneracyError);
    CHECK(align_direction(RealVector{5, -1, 2}, RealVector{0.1, 0.3, 0.2}) == -1);
    FlowOptions opt;
    opt.t_end = 1.0;
    for (int d : {1, -1}) {
        opt.direction = d;
        const auto t = integrate_flow(idiag({1, 2, 3}), idiag({1, 2, 3}), opt);
        CHECK(t.steps == 0);
    }
}

TEST_CASE("gradient_check: normal-metric gradient") {
    Rng rng(6);
    const auto l2 = OrbitState::from_spectrum(RealVector{2, -1}, instances::unitary(2, rng)).L;
    const auto r2 = gradient_check(l2, idiag({0.5, 1.5}), 5, 1e-5);
    CHECK(r2.max_rel_error <= 1e-10);
    CHECK_FALSE(r2.conditioning_warning);

    const auto l5 = OrbitState::from_spectrum(instances::separated_vector(5, rng), instances::unitary(5, rng)).L;
    const auto n5 = idiag(instances::separated_vector(5, rng));
    const auto r5 = gradient_check(l5, n5, 20, 1e-5);
    CHECK(r5.max_rel_error <= 1e-6);
    CHECK(r5.max_fd_rel_error <= 1e-6);

    // Tangent [L, delta] with delta in the centralizer vanishes, and so does its metric pairing.
    const auto ld = idiag({1, 2, 3});
    const auto zero = commutator(ld.matrix(), idiag({4, 5, 6}).matrix());
    const auto other = commutator(ld.matrix(), instances::skew_hermitian(3, rng).matrix());
    CHECK(zero.max_abs() == 0.0);
    CHECK(normal_metric(ld, other, zero) == 0.0);

    CHECK(gradient_check(idiag({1, 1, 2}), idiag({1, 2, 3}), 2, 1e-5).conditioning_warning);
}

TEST_CASE("classify_equilibria: counts, stable arrangement, errors") {
    const auto one = classify_equilibria(RealVector{4}, RealVector{2});
    REQUIRE(one.size() == 1);
    CHECK(one[0].stable);

    const auto two = classify_equilibria(RealVector{2, 1}, RealVector{1, 2});
    REQUIRE(two.size() == 2);
    std::size_t stable = 0;
    for (const auto& e : two)
        if (e.stable) {
            ++stable;
            CHECK(e.arrangement == PermutationMap({1, 0}));
            CHECK(e.trace_ln == -5.0);
        }
    CHECK(stable == 1);

    Rng rng(15);
    const RealVector lambda = instances::separated_vector(3, rng), nd = instances::separated_vector(3, rng);
    const auto all = classify_equilibria(lambda, nd);
    CHECK(all.size() == 6);
    const auto best = std::min_element(all.begin(), all.end(),
                                       [](const auto& a, const auto& b) { return a.trace_ln < b.trace_ln; });
    CHECK(best->stable);
    CHECK(std::count_if(all.begin(), all.end(), [](const auto& e) { return e.stable; }) == 1);

    CHECK_THROWS_AS(classify_equilibria(RealVector(9, 0.0), RealVector(9, 0.0)), DimensionError);
    CHECK_THROWS_AS(classify_equilibria(RealVector{1, 1}, RealVector{1, 2}), DegeneracyError);
}

TEST_CASE("monge_distance_objective: examples and the trace identity") {
    CHECK(monge_distance_objective(idiag({1, 2}), idiag({1, 2})) == 0.0);
    CHECK(monge_distance_objective(idiag({1, 2}), idiag({2, 1})) == doctest::Approx(2.0).epsilon(1e-15));
    Rng rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        const auto l = instances::skew_hermitian(4, rng), n = instances::skew_hermitian(4, rng);
        const double nl = l.matrix().frobenius_norm(), nn = n.matrix().frobenius_norm();
        CHECK(monge_distance_objective(l, n) ==
              doctest::Approx(nl * nl + nn * nn + 2.0 * trace_pairing(l, n)).epsilon(1e-10));
    }
}
