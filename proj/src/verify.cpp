#include "ot/verify.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "ot/bracketflow.hpp"
#include "ot/instances.hpp"
#include "ot/random.hpp"
#include "ot/schurhorn.hpp"
#include "ot/transport.hpp"

namespace ot::verify {

namespace {

/// results[i] = f(i); the parallel branch rethrows the first failure after the loop.
template <typename Result, typename F>
std::vector<Result> run_batch(std::size_t count, Execution execution, F f) {
    std::vector<Result> results(count);
    if (execution == Execution::Serial) {
        for (std::size_t i = 0; i < count; ++i) results[i] = f(i);
        return results;
    }
    std::vector<std::exception_ptr> errors(count);
    const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            results[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

std::size_t draw_size(Rng& rng, std::size_t lo, std::size_t hi) { return lo + rng.index(hi - lo + 1); }

}  // namespace

MkdReport run_mkd(const MkdConfig& config, Execution execution) {
    MkdReport report{config, {}};
    report.instances = run_batch<MkdInstance>(config.instances, execution, [&](std::size_t i) {
        Rng rng(instance_seed(config.seed, i));
        const std::size_t n = draw_size(rng, config.min_n, config.max_n);
        const CostMatrix cost(instances::uniform_cost(n, n, rng));
        const auto t = verify_triple_equality(cost);
        MkdInstance r{n, t.monge, t.kantorovich, t.dual, t.gap_mk, t.gap_kd};
        if (n <= config.brute_force_max_n) {
            r.brute_force_checked = true;
            r.brute_force_agrees = std::abs(solve_monge_brute_force(cost).value - t.monge) <= 1e-12;
        }
        return r;
    });
    for (const auto& r : report.instances) {
        report.max_gap_mk = std::max(report.max_gap_mk, r.gap_mk);
        report.max_gap_kd = std::max(report.max_gap_kd, r.gap_kd);
        report.brute_force_checked += r.brute_force_checked;
        report.brute_force_mismatches += !r.brute_force_agrees;
    }
    report.pass = report.max_gap_mk <= config.tol && report.max_gap_kd <= config.tol &&
                  report.brute_force_mismatches == 0;
    return report;
}

SchurHornReport run_schur_horn(const SchurHornConfig& config, Execution execution) {
    SchurHornReport report{config, {}};
    report.instances = run_batch<SchurHornInstance>(config.instances, execution, [&](std::size_t i) {
        Rng rng(instance_seed(config.seed, i));
        const std::size_t n = draw_size(rng, 1, config.max_n);
        SchurHornInstance r;
        r.n = n;

        const auto p = schur_projection(instances::hermitian(n, rng));
        r.min_slack = -std::abs(p.certificate.gaps.back());
        for (std::size_t k = 0; k + 1 < n; ++k) r.min_slack = std::min(r.min_slack, p.certificate.gaps[k]);
        r.witness_ok = is_doubly_stochastic(p.witness.matrix(), 1e-9) &&
                       max_abs_diff(p.witness.apply(p.spectrum), p.diagonal) <= 1e-9;

        const RealVector lambda = instances::uniform_vector(n, rng, -3.0, 3.0);
        const RealVector x = instances::doubly_stochastic(n, 1 + rng.index(n + 2), rng).apply(lambda);
        const auto a = horn_construct(lambda, x);
        r.spectrum_error = max_abs_diff(jacobi_eigh(a).values, decreasing_rearrangement(lambda));
        r.diagonal_error = max_abs_diff(a.diagonal(), x);
        return r;
    });
    bool witnesses = true;
    report.min_slack = 0.0;
    for (const auto& r : report.instances) {
        report.min_slack = std::min(report.min_slack, r.min_slack);
        report.max_spectrum_error = std::max(report.max_spectrum_error, r.spectrum_error);
        report.max_diagonal_error = std::max(report.max_diagonal_error, r.diagonal_error);
        witnesses = witnesses && r.witness_ok;
    }
    report.pass = witnesses && report.min_slack >= -config.slack_tol && report.max_spectrum_error <= config.spectrum_tol &&
                  report.max_diagonal_error <= config.diagonal_tol;
    return report;
}

BirkhoffReport run_birkhoff(const BirkhoffConfig& config, Execution execution) {
    BirkhoffReport report{config, {}};
    report.instances = run_batch<BirkhoffInstance>(config.instances, execution, [&](std::size_t i) {
        Rng rng(instance_seed(config.seed, i));
        const std::size_t n = draw_size(rng, 1, config.max_n);
        BirkhoffInstance r;
        r.n = n;
        const auto p = instances::doubly_stochastic(n, 1 + rng.index(n * n + n), rng);
        const auto terms = birkhoff_decompose(p, config.tol);
        r.terms = terms.size();
        RealMatrix diff = birkhoff_resum(terms, n);
        diff -= p.matrix();
        r.resum_error = diff.max_abs();

        const RealVector y = instances::uniform_vector(n, rng);
        const RealVector x = instances::doubly_stochastic(n, 1 + rng.index(2 * n), rng).apply(y);
        const auto chain = t_transform_chain(x, y);
        r.chain_length = chain.steps.size();
        r.chain_error = max_abs_diff(chain.apply(y), x);
        return r;
    });
    report.term_bound_ok = true;
    report.chain_bound_ok = true;
    for (const auto& r : report.instances) {
        report.max_resum_error = std::max(report.max_resum_error, r.resum_error);
        report.max_chain_error = std::max(report.max_chain_error, r.chain_error);
        report.term_bound_ok = report.term_bound_ok && r.terms <= (r.n - 1) * (r.n - 1) + 1;
        report.chain_bound_ok = report.chain_bound_ok && r.chain_length + 1 <= std::max<std::size_t>(r.n, 1);
    }
    report.pass = report.term_bound_ok && report.chain_bound_ok && report.max_resum_error <= config.tol &&
                  report.max_chain_error <= config.tol;
    return report;
}

namespace {

/// Relative mismatch between a forward difference of Tr(LN) and direction * |[L,N]|^2.
double derivative_mismatch(const OrbitState& s, const SkewHermitianMatrix& n, int direction) {
    constexpr double h = 1e-7;
    FlowOptions opt;
    opt.direction = direction;
    opt.step = h;
    opt.t_end = s.time + h;
    opt.converge_tol = 0.0;
    const auto t = integrate_flow(s, n, opt);
    const double c2 = t.samples.front().comm_norm * t.samples.front().comm_norm;
    const double fd = (t.samples.back().trace_ln - t.samples.front().trace_ln) / h;
    return std::abs(fd - direction * c2) / c2;
}

}  // namespace

FlowLimitReport run_flow_limit(const FlowLimitConfig& config, Execution execution) {
    FlowLimitReport report{config, {}};
    report.instances = run_batch<FlowLimitInstance>(config.instances, execution, [&](std::size_t i) {
        Rng rng(instance_seed(config.seed, i));
        const std::size_t n = draw_size(rng, config.min_n, config.max_n);
        const RealVector lambda = instances::separated_vector(n, rng);
        const RealVector nd = instances::separated_vector(n, rng);
        const auto start = OrbitState::from_spectrum(lambda, instances::unitary(n, rng));
        const auto nmat = SkewHermitianMatrix::imaginary_diagonal(nd);

        FlowLimitInstance r;
        r.n = n;
        r.direction = align_direction(lambda, nd);
        FlowOptions opt;
        opt.step = config.step;
        opt.t_end = config.t_end;
        opt.direction = r.direction;
        opt.sample_every = 10;
        const auto trace = integrate_flow(start, nmat, opt);
        r.converged = trace.converged;
        r.t_final = trace.final_state.time;
        for (const auto& s : trace.samples) r.max_drift = std::max(r.max_drift, s.spec_drift);
        ComplexMatrix target = SkewHermitianMatrix::imaginary_diagonal(similarly_ordered(lambda, nd)).matrix();
        target -= trace.final_state.L.matrix();
        r.limit_error = target.max_abs();

        r.derivative_error = derivative_mismatch(start, nmat, r.direction);
        FlowOptions early = opt;
        early.t_end = 1.0;
        const auto mid = integrate_flow(start, nmat, early);
        if (mid.samples.back().comm_norm >= 1e-6)
            r.derivative_error = std::max(r.derivative_error, derivative_mismatch(mid.final_state, nmat, r.direction));

        r.gradient_error = gradient_check(start.L, nmat, 5, 1e-5, instance_seed(config.seed, i)).max_rel_error;
        return r;
    });
    for (const auto& r : report.instances) {
        report.aligned_limits += r.limit_error <= config.limit_tol;
        report.max_limit_error = std::max(report.max_limit_error, r.limit_error);
        report.max_drift = std::max(report.max_drift, r.max_drift);
        report.max_derivative_error = std::max(report.max_derivative_error, r.derivative_error);
        report.max_gradient_error = std::max(report.max_gradient_error, r.gradient_error);
    }
    report.pass = report.aligned_limits == report.instances.size() && report.max_drift <= config.drift_tol &&
                  report.max_derivative_error <= config.derivative_tol &&
                  report.max_gradient_error <= config.gradient_tol;
    return report;
}

}  // namespace ot::verify
