#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "ot/errors.hpp"
#include "ot/instances.hpp"
#include "ot/schurhorn.hpp"

using namespace ot;

TEST_CASE("schur_projection: diagonal input has the identity witness") {
    const auto p = schur_projection(HermitianMatrix::from_real(RealMatrix{{3, 0}, {0, 1}}));
    CHECK(p.diagonal == RealVector{3, 1});
    CHECK(p.spectrum == RealVector{3, 1});
    CHECK(p.witness.matrix() == RealMatrix::identity(2));
    CHECK(p.certificate.holds);
}

TEST_CASE("schur_projection: [[2,1],[1,2]] averages the spectrum") {
    const auto p = schur_projection(HermitianMatrix::from_real(RealMatrix{{2, 1}, {1, 2}}));
    CHECK(p.diagonal == RealVector{2, 2});
    CHECK(p.spectrum[0] == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(p.spectrum[1] == doctest::Approx(1.0).epsilon(1e-15));
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) CHECK(p.witness.matrix()(i, j) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("schur_projection: conjugated diag(5,3,1) and random Hermitian matrices") {
    Rng rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + rng.index(9);
        const auto a = (trial == 0) ? HermitianMatrix(conjugate(instances::unitary(3, rng).matrix(),
                                                                ComplexMatrix::diagonal(std::vector<cplx>{5.0, 3.0, 1.0})))
                                    : instances::hermitian(n, rng);
        const auto p = schur_projection(a);
        CHECK(std::is_sorted(p.spectrum.rbegin(), p.spectrum.rend()));
        CHECK(is_doubly_stochastic(p.witness.matrix(), 1e-9));
        CHECK(max_abs_diff(p.witness.apply(p.spectrum), p.diagonal) <= 1e-9);
        CHECK(p.certificate.holds);
        for (std::size_t k = 0; k + 1 < p.certificate.gaps.size(); ++k) CHECK(p.certificate.gaps[k] >= -1e-9);
    }
}

namespace {

void check_horn(const RealVector& spectrum, const RealVector& target) {
    const auto a = horn_construct(spectrum, target);
    CHECK(hermitian_residual(a.matrix()) <= 1e-13);
    CHECK(max_abs_diff(a.diagonal(), target) <= 1e-9);
    const auto es = jacobi_eigh(a);
    CHECK(max_abs_diff(es.values, decreasing_rearrangement(spectrum)) <= 1e-8);
}

}  // namespace

TEST_CASE("horn_construct: target equal to the spectrum gives a diagonal matrix") {
    const RealVector s{4, 1, 2};
    const auto a = horn_construct(s, s);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(std::abs(a.matrix()(i, j)) == doctest::Approx(i == j ? s[i] : 0.0).epsilon(1e-15));
}

TEST_CASE("horn_construct: (3,1) onto diagonal (2,2) has |off-diagonal| = 1") {
    const auto a = horn_construct(RealVector{3, 1}, RealVector{2, 2});
    CHECK(a.matrix()(0, 0).real() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(a.matrix()(1, 1).real() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(std::abs(a.matrix()(0, 1)) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("horn_construct: spectrum (4,2,0) onto (2,2,2) and unsorted targets") {
    check_horn({4, 2, 0}, {2, 2, 2});
    check_horn({0, 4, 2}, {1, 3, 2});
    check_horn({5, 5, 1, 1}, {3, 1, 3, 5});
}

TEST_CASE("horn_construct: random roundtrip through schur_projection") {
    Rng rng(5);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + rng.index(12);
        const RealVector lambda = instances::uniform_vector(n, rng, -3.0, 3.0);
        const RealVector x = instances::doubly_stochastic(n, 1 + rng.index(n + 2), rng).apply(lambda);
        check_horn(lambda, x);
        const auto p = schur_projection(horn_construct(lambda, x));
        CHECK(max_abs_diff(p.diagonal, x) <= 1e-9);
    }
}

TEST_CASE("horn_construct: rejects a target outside the permutohedron") {
    CHECK_THROWS_AS(horn_construct(RealVector{3, 1}, RealVector{3.5, 0.5}), MajorizationError);
    CHECK_THROWS_AS(horn_construct(RealVector{3, 1}, RealVector{1, 1}), MajorizationError);
    CHECK_THROWS_AS(horn_construct(RealVector{3, 1}, RealVector{2}), DimensionError);
}

TEST_CASE("permutohedron_contains: examples and the vertex LP oracle") {
    const RealVector y{3, 2, 0.5};
    CHECK(permutohedron_contains(y, y));
    CHECK(permutohedron_contains(RealVector(3, 5.5 / 3.0), y));
    CHECK_FALSE(permutohedron_contains(RealVector{3.1, 2, 0.5}, y));

    Rng rng(17);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 2 + rng.index(4);
        const RealVector yy = instances::uniform_vector(n, rng);
        RealVector p = instances::doubly_stochastic(n, 3, rng).apply(yy);
        if (trial % 2 == 1) {
            // Move mass between two coordinates, leaving the sum fixed.
            const double shift = rng.uniform(-1.0, 1.0);
            p[0] += shift;
            p[1] -= shift;
        }
        CHECK(permutohedron_contains(p, yy) == oracle::in_permutohedron(p, yy));
    }
}
