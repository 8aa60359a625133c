#pragma once

#include <cstddef>
#include <span>

#include "ot/annulus.hpp"

namespace ot::detail {

/// w = {x, z} = -x_theta, centered periodic differences, row i.
inline void bracket_potential_row(const GridFunction& x, std::size_t i, std::span<double> w) {
    const std::size_t nt = x.ntheta();
    const double half_inv = 0.5 * static_cast<double>(nt);
    for (std::size_t j = 0; j < nt; ++j) {
        const std::size_t jp = (j + 1 == nt) ? 0 : j + 1;
        const std::size_t jm = (j == 0) ? nt - 1 : j - 1;
        w[i * nt + j] = -(x(i, jp) - x(i, jm)) * half_inv;
    }
}

/// Conservative form d/dtheta(w x_z) - d/dz(w x_theta) of {x, w}. The z-flux
/// w x_theta = -x_theta^2 is odd across the walls, so the z sums telescope and
/// the mean of the right side is zero up to roundoff.
inline void centered_row(const GridFunction& x, std::span<const double> w, std::size_t i, std::span<double> out) {
    const std::size_t nz = x.nz(), nt = x.ntheta();
    const double hz = 0.5 * static_cast<double>(nz);
    const double ht = 0.5 * static_cast<double>(nt);
    auto flux_z = [&](std::size_t r, std::size_t j) {
        const double wv = w[r * nt + j];
        return -wv * wv;
    };
    auto x_z = [&](std::size_t j) {
        if (i == 0) return (x(1, j) - x(0, j)) * static_cast<double>(nz);
        if (i + 1 == nz) return (x(nz - 1, j) - x(nz - 2, j)) * static_cast<double>(nz);
        return (x(i + 1, j) - x(i - 1, j)) * hz;
    };
    for (std::size_t j = 0; j < nt; ++j) {
        const std::size_t jp = (j + 1 == nt) ? 0 : j + 1;
        const std::size_t jm = (j == 0) ? nt - 1 : j - 1;
        const double h_up = (i + 1 == nz) ? -flux_z(i, j) : flux_z(i + 1, j);
        const double h_dn = (i == 0) ? -flux_z(i, j) : flux_z(i - 1, j);
        const double p_p = w[i * nt + jp] * x_z(jp);
        const double p_m = w[i * nt + jm] * x_z(jm);
        out[i * nt + j] = (p_p - p_m) * ht - (h_up - h_dn) * hz;
    }
}

/// Arakawa's average of the three second-order Jacobians J(x, w) = x_z w_theta - x_theta w_z.
/// Rows beyond the walls are linear extrapolations.
inline void arakawa_row(const GridFunction& x, std::span<const double> w, std::size_t i, std::span<double> out) {
    const std::size_t nz = x.nz(), nt = x.ntheta();
    const double scale = static_cast<double>(nz) * static_cast<double>(nt) / 12.0;
    auto at = [&](auto&& f, std::ptrdiff_t r, std::size_t j) {
        if (r < 0) return 2.0 * f(0, j) - f(1, j);
        if (r >= static_cast<std::ptrdiff_t>(nz)) return 2.0 * f(nz - 1, j) - f(nz - 2, j);
        return f(static_cast<std::size_t>(r), j);
    };
    auto xa = [&](std::size_t r, std::size_t j) { return x(r, j); };
    auto wa = [&](std::size_t r, std::size_t j) { return w[r * nt + j]; };
    const auto r0 = static_cast<std::ptrdiff_t>(i);
    for (std::size_t j = 0; j < nt; ++j) {
        const std::size_t jp = (j + 1 == nt) ? 0 : j + 1;
        const std::size_t jm = (j == 0) ? nt - 1 : j - 1;
        const double a_n = at(xa, r0 + 1, j), a_s = at(xa, r0 - 1, j);
        const double a_e = x(i, jp), a_w = x(i, jm);
        const double a_ne = at(xa, r0 + 1, jp), a_nw = at(xa, r0 + 1, jm);
        const double a_se = at(xa, r0 - 1, jp), a_sw = at(xa, r0 - 1, jm);
        const double b_n = at(wa, r0 + 1, j), b_s = at(wa, r0 - 1, j);
        const double b_e = wa(i, jp), b_w = wa(i, jm);
        const double b_ne = at(wa, r0 + 1, jp), b_nw = at(wa, r0 + 1, jm);
        const double b_se = at(wa, r0 - 1, jp), b_sw = at(wa, r0 - 1, jm);
        const double jpp = (a_n - a_s) * (b_e - b_w) - (a_e - a_w) * (b_n - b_s);
        const double jpx = a_n * (b_ne - b_nw) - a_s * (b_se - b_sw) - a_e * (b_ne - b_se) + a_w * (b_nw - b_sw);
        const double jxp = b_e * (a_ne - a_se) - b_w * (a_nw - a_sw) - b_n * (a_ne - a_nw) + b_s * (a_se - a_sw);
        out[i * nt + j] = (jpp + jpx + jxp) * scale;
    }
}

inline void bracket_row(const GridFunction& x, BracketScheme scheme, std::span<const double> w, std::size_t i,
                        std::span<double> out) {
    if (scheme == BracketScheme::Centered) {
        centered_row(x, w, i, out);
    } else {
        arakawa_row(x, w, i, out);
    }
}

}  // namespace ot::detail
