#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "ot/annulus.hpp"
#include "ot/instances.hpp"
#include "ot/kernels.hpp"

using namespace ot;

TEST_CASE("bracket kernels: parallel matches the serial reference bit for bit") {
    Rng rng(1);
    for (auto scheme : {BracketScheme::Centered, BracketScheme::Arakawa}) {
        for (auto [nz, nt] : {std::pair<std::size_t, std::size_t>{8, 8}, {13, 29}, {64, 64}}) {
            const auto x = instances::uniform_grid(nz, nt, rng);
            std::vector<double> a(x.cells()), b(x.cells());
            bracket_rhs_serial(x, scheme, a);
            bracket_rhs_parallel(x, scheme, b);
            CHECK(a == b);
        }
    }
}

TEST_CASE("bracket kernels: zero on theta-independent data, mean zero otherwise") {
    Rng rng(2);
    GridFunction g(16, 16);
    for (std::size_t i = 0; i < 16; ++i)
        for (std::size_t j = 0; j < 16; ++j) g(i, j) = static_cast<double>(i * i);
    std::vector<double> out(g.cells());
    for (auto scheme : {BracketScheme::Centered, BracketScheme::Arakawa}) {
        bracket_rhs_serial(g, scheme, out);
        for (double v : out) CHECK(v == 0.0);
    }
    const auto x = instances::uniform_grid(16, 16, rng);
    bracket_rhs_serial(x, BracketScheme::Centered, out);
    double sum = 0.0, scale = 0.0;
    for (double v : out) {
        sum += v;
        scale += std::abs(v);
    }
    CHECK(std::abs(sum) <= 1e-13 * scale);
}

TEST_CASE("bracket kernels: linearization about x = z is theta-diffusion") {
    // x = z + eps cos(2 pi theta): {x, {x, z}} ~ -x_theta_theta = eps (2 pi)^2 cos(2 pi theta).
    const std::size_t n = 64;
    const double eps = 1e-6;
    GridFunction x(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) x(i, j) = x.z(i) + eps * std::cos(2 * std::numbers::pi * x.theta(j));
    std::vector<double> out(x.cells());
    bracket_rhs_serial(x, BracketScheme::Centered, out);
    const double k2 = 4 * std::numbers::pi * std::numbers::pi;
    for (std::size_t i = 1; i + 1 < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double expected = eps * k2 * std::cos(2 * std::numbers::pi * x.theta(j));
            CHECK(std::abs(out[i * n + j] - expected) <= 0.01 * eps * k2);
        }
}
