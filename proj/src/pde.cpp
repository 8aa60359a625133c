#include <algorithm>
#include <cmath>

#include "ot/annulus.hpp"
#include "ot/errors.hpp"
#include "ot/kernels.hpp"

namespace ot {

namespace {

double theta_diff(const GridFunction& x, std::size_t i, std::size_t j) {
    const std::size_t nt = x.ntheta();
    const std::size_t jp = (j + 1 == nt) ? 0 : j + 1;
    const std::size_t jm = (j == 0) ? nt - 1 : j - 1;
    return (x(i, jp) - x(i, jm)) * 0.5 * static_cast<double>(nt);
}

double z_diff(const GridFunction& x, std::size_t i, std::size_t j) {
    const std::size_t nz = x.nz();
    if (nz == 1) return 0.0;
    if (i == 0) return (x(1, j) - x(0, j)) * static_cast<double>(nz);
    if (i + 1 == nz) return (x(nz - 1, j) - x(nz - 2, j)) * static_cast<double>(nz);
    return (x(i + 1, j) - x(i - 1, j)) * 0.5 * static_cast<double>(nz);
}

}  // namespace

double theta_derivative_norm(const GridFunction& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.nz(); ++i)
        for (std::size_t j = 0; j < x.ntheta(); ++j) {
            const double d = theta_diff(x, i, j);
            s += d * d;
        }
    return std::sqrt(s / static_cast<double>(x.cells()));
}

double max_gradient(const GridFunction& x) {
    double m = 0.0;
    for (std::size_t i = 0; i < x.nz(); ++i)
        for (std::size_t j = 0; j < x.ntheta(); ++j) m = std::max(m, std::hypot(z_diff(x, i, j), theta_diff(x, i, j)));
    return m;
}

PdeTrace integrate_pde(const GridFunction& x0, const PdeOptions& options) {
    if (x0.nz() < 8 || x0.ntheta() < 8) throw DimensionError("integrate_pde: need nz, ntheta >= 8");
    if (!(options.step > 0.0) || !(options.t_end >= 0.0)) throw InvariantError("integrate_pde: step must be positive");
    if (options.direction != 1 && options.direction != -1) throw InvariantError("integrate_pde: direction must be +1 or -1");

    const std::size_t n = x0.cells();
    const double dir = options.direction;
    const auto steps = static_cast<std::size_t>(std::ceil(options.t_end / options.step - 1e-9));
    const double dt = steps == 0 ? 0.0 : options.t_end / static_cast<double>(steps);
    const std::size_t sample_every = std::max<std::size_t>(1, options.sample_every);
    auto rhs = [&](const GridFunction& g, std::span<double> out) {
        if (options.parallel) {
            bracket_rhs_parallel(g, options.scheme, out);
        } else {
            bracket_rhs_serial(g, options.scheme, out);
        }
    };

    PdeTrace trace{{}, x0, 0, 0.0, false};
    GridFunction& x = trace.final_state;
    GridFunction stage = x0;
    std::vector<double> k1(n), k2(n), k3(n), k4(n);
    const double grad0 = max_gradient(x0);

    auto record = [&](double t) {
        PdeSample s;
        s.t = t;
        const auto m = moments(x, 4);
        std::copy(m.begin(), m.end(), s.moments);
        s.xtheta_norm = theta_derivative_norm(x);
        s.max_gradient = max_gradient(x);
        trace.samples.push_back(s);
    };
    record(0.0);

    for (std::size_t step = 1; step <= steps; ++step) {
        const double t_prev = trace.t_final;
        auto xv = x.values();
        auto sv = stage.values();
        rhs(x, k1);
        for (std::size_t c = 0; c < n; ++c) sv[c] = xv[c] + 0.5 * dt * dir * k1[c];
        rhs(stage, k2);
        for (std::size_t c = 0; c < n; ++c) sv[c] = xv[c] + 0.5 * dt * dir * k2[c];
        rhs(stage, k3);
        for (std::size_t c = 0; c < n; ++c) sv[c] = xv[c] + dt * dir * k3[c];
        rhs(stage, k4);
        for (std::size_t c = 0; c < n; ++c) xv[c] += dt / 6.0 * dir * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
        if (!x.all_finite()) throw BlowupError("integrate_pde: non-finite state", t_prev);

        trace.steps = step;
        trace.t_final = (step == steps) ? options.t_end : static_cast<double>(step) * dt;
        const bool shock = max_gradient(x) > options.shock_factor * grad0;
        if (step % sample_every == 0 || step == steps || shock) record(trace.t_final);
        if (shock) {
            trace.shock_detected = true;
            break;
        }
    }
    return trace;
}

}  // namespace ot
