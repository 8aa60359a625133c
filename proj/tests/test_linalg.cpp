#include <cmath>

#include "doctest.h"
#include "ot/errors.hpp"
#include "ot/instances.hpp"
#include "ot/linalg.hpp"

using namespace ot;

namespace {

double reconstruction_residual(const HermitianMatrix& a, const Eigensystem& es) {
    ComplexMatrix r = conjugate_diagonal(es.vectors.matrix(), es.values);
    r -= a.matrix();
    return r.max_abs();
}

}  // namespace

TEST_CASE("jacobi_eigh: already diagonal input is returned as is") {
    const auto a = HermitianMatrix::from_real(RealMatrix{{3, 0}, {0, 1}});
    const auto es = jacobi_eigh(a);
    CHECK(es.values == RealVector{3, 1});
    CHECK(es.vectors.matrix() == ComplexMatrix::identity(2));
    CHECK(es.sweeps == 0);
}

TEST_CASE("jacobi_eigh: 2x2 closed form a +- |b|") {
    const auto a = HermitianMatrix::from_real(RealMatrix{{2, 1}, {1, 2}});
    const auto es = jacobi_eigh(a);
    CHECK(es.values[0] == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(es.values[1] == doctest::Approx(1.0).epsilon(1e-15));
    const auto& q = es.vectors.matrix();
    const double r = 1.0 / std::sqrt(2.0);
    // Up to a phase per column: |<q_0, (1,1)/sqrt2>| = 1, |<q_1, (1,-1)/sqrt2>| = 1.
    CHECK(std::abs(q(0, 0) * r + q(1, 0) * r) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(q(0, 1) * r - q(1, 1) * r) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("jacobi_eigh: complex off-diagonal phase") {
    // [[1, i], [-i, 1]] has eigenvalues 2 and 0.
    const HermitianMatrix a(ComplexMatrix{{1.0, cplx(0, 1)}, {cplx(0, -1), 1.0}});
    const auto es = jacobi_eigh(a);
    CHECK(es.values[0] == doctest::Approx(2.0));
    CHECK(std::abs(es.values[1]) < 1e-15);
    CHECK(reconstruction_residual(a, es) < 1e-15);
}

TEST_CASE("jacobi_eigh: reconstruction and ordering over random Hermitian matrices") {
    Rng rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + rng.index(12);
        const double scale = std::pow(10.0, rng.uniform(-2.0, 3.0));
        const auto a = instances::hermitian(n, rng, scale);
        const auto es = jacobi_eigh(a);
        CHECK(reconstruction_residual(a, es) <= 1e-10 * std::max(1.0, a.matrix().max_abs()));
        CHECK(std::is_sorted(es.values.rbegin(), es.values.rend()));
    }
}

TEST_CASE("jacobi_eigh: spectrum invariant under unitary conjugation") {
    Rng rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + rng.index(7);
        const auto a = instances::hermitian(n, rng, 5.0);
        const auto u = instances::unitary(n, rng);
        ComplexMatrix b = conjugate(u.matrix(), a.matrix());
        const auto ea = jacobi_eigh(a);
        const auto eb = jacobi_eigh(HermitianMatrix(b));
        CHECK(max_abs_diff(ea.values, eb.values) <= 1e-10);
    }
}

TEST_CASE("jacobi_eigh: zero matrix") {
    const auto es = jacobi_eigh(HermitianMatrix::from_real(RealMatrix(4, 4)));
    CHECK(es.values == RealVector(4, 0.0));
    CHECK(es.vectors.matrix() == ComplexMatrix::identity(4));
}

TEST_CASE("jacobi_eigh: sweep cap reports the off-diagonal residual") {
    const auto a = HermitianMatrix::from_real(RealMatrix{{2, 1}, {1, 2}});
    try {
        (void)jacobi_eigh(a, 0);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(e.residual() == doctest::Approx(std::sqrt(2.0)));
    }
}

TEST_CASE("structured matrix types reject violations") {
    CHECK_THROWS_AS(HermitianMatrix(ComplexMatrix{{1.0, 2.0}, {0.0, 1.0}}), InvariantError);
    CHECK_THROWS_AS(SkewHermitianMatrix(ComplexMatrix{{1.0, 0.0}, {0.0, 0.0}}), InvariantError);
    CHECK_THROWS_AS(UnitaryMatrix(ComplexMatrix{{2.0, 0.0}, {0.0, 1.0}}), InvariantError);
    CHECK_THROWS_AS(HermitianMatrix(ComplexMatrix(2, 3)), DimensionError);
}

TEST_CASE("commutator") {
    Rng rng(3);
    const auto a = instances::skew_hermitian(5, rng);
    const auto b = instances::skew_hermitian(5, rng);

    CHECK(commutator(a.matrix(), a.matrix()).max_abs() == 0.0);

    const RealVector d1{1, 2, 3}, d2{-4, 0.5, 7};
    const auto da = SkewHermitianMatrix::imaginary_diagonal(d1);
    const auto db = SkewHermitianMatrix::imaginary_diagonal(d2);
    CHECK(commutator(da.matrix(), db.matrix()).max_abs() == 0.0);

    const ComplexMatrix c = commutator(a.matrix(), b.matrix());
    CHECK(skew_hermitian_residual(c) <= 1e-12);
    // antisymmetry
    ComplexMatrix s = commutator(b.matrix(), a.matrix());
    s += c;
    CHECK(s.max_abs() <= 1e-14);

    CHECK_THROWS_AS(commutator(ComplexMatrix(2, 2), ComplexMatrix(3, 3)), DimensionError);
}

TEST_CASE("trace_pairing") {
    CHECK(trace_pairing(ComplexMatrix::identity(3), ComplexMatrix::identity(3)) == 3.0);

    const RealVector lam{3, 1, 2}, nd{0.5, -2, 4};
    const auto l = SkewHermitianMatrix::imaginary_diagonal(lam);
    const auto n = SkewHermitianMatrix::imaginary_diagonal(nd);
    CHECK(trace_pairing(l, n) == doctest::Approx(-(3 * 0.5 + 1 * -2 + 2 * 4)));

    Rng rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t m = 1 + rng.index(9);
        const auto a = instances::skew_hermitian(m, rng);
        const auto b = instances::skew_hermitian(m, rng);
        // naive double loop in the opposite order
        double naive = 0.0;
        for (std::size_t k = 0; k < m; ++k)
            for (std::size_t i = 0; i < m; ++i)
                naive += a.matrix()(i, k).real() * b.matrix()(k, i).real() - a.matrix()(i, k).imag() * b.matrix()(k, i).imag();
        CHECK(std::abs(trace_pairing(a, b) - naive) <= 1e-13);
        CHECK(std::abs(trace_pairing(a, b) - trace_pairing(b, a)) <= 1e-13);
    }
    CHECK_THROWS_AS(trace_pairing(ComplexMatrix(2, 2), ComplexMatrix(3, 3)), DimensionError);
}

TEST_CASE("cayley transform is unitary and solve inverts") {
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 1 + rng.index(8);
        const auto a = instances::skew_hermitian(n, rng, 3.0);
        const auto u = cayley(a);
        ComplexMatrix g = adjoint(u.matrix()) * u.matrix();
        g -= ComplexMatrix::identity(n);
        CHECK(g.max_abs() <= 1e-12);
        // (I - A) U == I + A
        ComplexMatrix lhs = (ComplexMatrix::identity(n) - a.matrix()) * u.matrix();
        lhs -= ComplexMatrix::identity(n) + a.matrix();
        CHECK(lhs.max_abs() <= 1e-12);
    }
    CHECK_THROWS_AS(solve(ComplexMatrix(2, 2), ComplexMatrix::identity(2)), InvariantError);
}
