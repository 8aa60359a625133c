#include "ot/bracketflow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ot/errors.hpp"
#include "ot/instances.hpp"
#include "ot/random.hpp"

namespace ot {

namespace {

constexpr cplx kI{0.0, 1.0};

void require_same_size(const SkewHermitianMatrix& a, const SkewHermitianMatrix& b, const char* who) {
    if (a.size() != b.size()) throw DimensionError(std::string(who) + ": dimension mismatch");
}

RealVector spectrum_of(const SkewHermitianMatrix& l) { return jacobi_eigh(l.divided_by_i()).values; }

/// Modified Gram-Schmidt on the columns; keeps the accumulated frame unitary
/// over long runs.
ComplexMatrix reorthonormalize(ComplexMatrix q) {
    const std::size_t n = q.rows();
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t p = 0; p < k; ++p) {
            cplx dot{};
            for (std::size_t r = 0; r < n; ++r) dot += std::conj(q(r, p)) * q(r, k);
            for (std::size_t r = 0; r < n; ++r) q(r, k) -= dot * q(r, p);
        }
        double norm = 0.0;
        for (std::size_t r = 0; r < n; ++r) norm += std::norm(q(r, k));
        norm = std::sqrt(norm);
        for (std::size_t r = 0; r < n; ++r) q(r, k) /= norm;
    }
    return q;
}

void require_distinct(std::span<const double> x, const char* who) {
    RealVector s(x.begin(), x.end());
    std::sort(s.begin(), s.end());
    for (std::size_t k = 1; k < s.size(); ++k)
        if (s[k] == s[k - 1]) throw DegeneracyError(std::string(who) + ": repeated entries");
}

}  // namespace

OrbitState OrbitState::from_spectrum(std::span<const double> spectrum, const UnitaryMatrix& q) {
    if (spectrum.size() != q.size()) throw DimensionError("OrbitState: spectrum and frame sizes differ");
    const ComplexMatrix h = conjugate_diagonal(q.matrix(), spectrum);
    ComplexMatrix l = h;
    l *= kI;
    return OrbitState{SkewHermitianMatrix::skew_part(l), RealVector(spectrum.begin(), spectrum.end()), q, 0.0};
}

OrbitState OrbitState::from_matrix(const SkewHermitianMatrix& l) {
    auto es = jacobi_eigh(l.divided_by_i());
    return OrbitState{l, std::move(es.values), std::move(es.vectors), 0.0};
}

double OrbitState::frame_residual() const {
    ComplexMatrix rebuilt = conjugate_diagonal(Q.matrix(), reference_spectrum);
    rebuilt *= kI;
    return (L.matrix() - rebuilt).max_abs();
}

SkewHermitianMatrix double_bracket_rhs(const SkewHermitianMatrix& l, const SkewHermitianMatrix& n) {
    require_same_size(l, n, "double_bracket_rhs");
    return commutator(l, commutator(l, n));
}

FlowTrace integrate_flow(const OrbitState& start, const SkewHermitianMatrix& n, const FlowOptions& options) {
    require_same_size(start.L, n, "integrate_flow");
    if (options.direction != 1 && options.direction != -1) throw InvariantError("integrate_flow: direction must be +1 or -1");
    if (!(options.step > 0.0) || !(options.t_end >= 0.0)) throw InvariantError("integrate_flow: step must be positive");
    const double dir = options.direction;
    const RealVector reference = decreasing_rearrangement(start.reference_spectrum);
    const std::size_t sample_every = std::max<std::size_t>(1, options.sample_every);

    FlowTrace trace{{}, start, false, 0, 0};
    OrbitState& s = trace.final_state;
    double h = options.step;

    auto record = [&](const SkewHermitianMatrix& c) {
        FlowSample sample;
        sample.t = s.time;
        sample.trace_ln = trace_pairing(s.L, n);
        sample.comm_norm = c.matrix().frobenius_norm();
        sample.dist_sq = monge_distance_objective(s.L, n);
        sample.spec_drift = max_abs_diff(spectrum_of(s.L), reference);
        trace.samples.push_back(sample);
    };

    for (;;) {
        const SkewHermitianMatrix c = commutator(s.L, n);
        const double cnorm = c.matrix().frobenius_norm();
        const bool done = cnorm <= options.converge_tol || s.time >= options.t_end || trace.steps >= options.max_steps;
        if (trace.steps % sample_every == 0 || done) {
            record(c);
        }
        if (cnorm <= options.converge_tol) {
            trace.converged = true;
            break;
        }
        if (done) break;

        const double tr = trace_pairing(s.L, n);
        const double slack = 64.0 * std::numeric_limits<double>::epsilon() * (std::abs(tr) + 1.0);
        for (;;) {
            const double dt = std::min(h, options.t_end - s.time);
            ComplexMatrix a = c.matrix();
            a *= cplx(-dir * 0.5 * dt, 0.0);
            const UnitaryMatrix u = cayley(SkewHermitianMatrix(std::move(a)));
            const ComplexMatrix next = conjugate(u.matrix(), s.L.matrix());
            if (!next.all_finite()) throw InvariantError("integrate_flow: non-finite state");
            SkewHermitianMatrix l_next = SkewHermitianMatrix::skew_part(next);
            const double tr_next = trace_pairing(l_next, n);
            if (dir * (tr_next - tr) < -slack && h > 1e-14 * options.step) {
                h *= 0.5;
                ++trace.step_halvings;
                continue;
            }
            s.L = std::move(l_next);
            ComplexMatrix q = u.matrix() * s.Q.matrix();
            if ((trace.steps + 1) % 1000 == 0) q = reorthonormalize(std::move(q));
            s.Q = UnitaryMatrix(std::move(q));
            s.time = (dt == options.t_end - s.time) ? options.t_end : s.time + dt;
            break;
        }
        ++trace.steps;
    }
    return trace;
}

FlowTrace integrate_flow(const SkewHermitianMatrix& l0, const SkewHermitianMatrix& n, const FlowOptions& options) {
    return integrate_flow(OrbitState::from_matrix(l0), n, options);
}

RealVector similarly_ordered(std::span<const double> lambda, std::span<const double> n_diag) {
    if (lambda.size() != n_diag.size()) throw DimensionError("similarly_ordered: length mismatch");
    const RealVector sorted = decreasing_rearrangement(lambda);
    const auto order = decreasing_order(n_diag);
    RealVector out(lambda.size());
    for (std::size_t k = 0; k < order.size(); ++k) out[order[k]] = sorted[k];
    return out;
}

int align_direction(std::span<const double> lambda, std::span<const double> n_diag) {
    if (lambda.size() != n_diag.size()) throw DimensionError("align_direction: length mismatch");
    require_distinct(lambda, "align_direction");
    require_distinct(n_diag, "align_direction");
    const RealVector same = similarly_ordered(lambda, n_diag);
    RealVector opposite = same;
    {
        RealVector asc = decreasing_rearrangement(lambda);
        std::reverse(asc.begin(), asc.end());
        const auto order = decreasing_order(n_diag);
        for (std::size_t k = 0; k < order.size(); ++k) opposite[order[k]] = asc[k];
    }
    // Tr(LN) = -sum lambda_i n_i on diagonal pairs; d/dt Tr(LN) = direction * |[L,N]|^2.
    double tr_same = 0.0, tr_opposite = 0.0;
    for (std::size_t i = 0; i < same.size(); ++i) {
        tr_same -= same[i] * n_diag[i];
        tr_opposite -= opposite[i] * n_diag[i];
    }
    return tr_same <= tr_opposite ? -1 : 1;
}

double normal_metric(const SkewHermitianMatrix& l, const ComplexMatrix& tangent_a, const ComplexMatrix& tangent_b) {
    const std::size_t n = l.size();
    if (tangent_a.rows() != n || tangent_b.rows() != n) throw DimensionError("normal_metric: dimension mismatch");
    const auto es = jacobi_eigh(l.divided_by_i());
    const ComplexMatrix& q = es.vectors.matrix();
    const ComplexMatrix qh = adjoint(q);
    const ComplexMatrix a = qh * tangent_a * q;
    const ComplexMatrix b = qh * tangent_b * q;
    const double gap_floor = 1e-8 * std::max(1.0, std::abs(es.values.front()) + std::abs(es.values.back()));
    // In the eigenbasis [L, X]_ab = i (lambda_a - lambda_b) X_ab; entries on
    // the centralizer (equal eigenvalues) are dropped.
    cplx sum{};
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t r = 0; r < n; ++r) {
            const double gpr = es.values[p] - es.values[r];
            if (std::abs(gpr) <= gap_floor) continue;
            const cplx xa = a(p, r) / (kI * gpr);
            const cplx xb = b(r, p) / (kI * -gpr);
            sum += xa * xb;
        }
    return -sum.real();
}

GradientCheckResult gradient_check(const SkewHermitianMatrix& l, const SkewHermitianMatrix& n,
                                   std::size_t num_directions, double eps, std::uint64_t seed) {
    require_same_size(l, n, "gradient_check");
    GradientCheckResult result;
    const RealVector spec = spectrum_of(l);
    for (std::size_t k = 1; k < spec.size(); ++k)
        if (spec[k - 1] - spec[k] < 1e-8) result.conditioning_warning = true;

    const ComplexMatrix grad = double_bracket_rhs(l, n).matrix();
    const double scale = l.matrix().frobenius_norm() * n.matrix().frobenius_norm();
    Rng rng(seed);
    auto rel = [](double a, double b, double floor) {
        const double d = std::max({std::abs(a), std::abs(b), floor});
        return std::abs(a - b) / d;
    };
    for (std::size_t k = 0; k < num_directions; ++k) {
        const SkewHermitianMatrix delta = instances::skew_hermitian(l.size(), rng);
        const ComplexMatrix tangent = commutator(l.matrix(), delta.matrix());
        const double floor = 1e-13 * std::max(1.0, scale * delta.matrix().frobenius_norm() * l.matrix().frobenius_norm());
        const double analytic = trace_pairing(tangent, n.matrix());
        const double metric = normal_metric(l, grad, tangent);
        result.max_rel_error = std::max(result.max_rel_error, rel(analytic, metric, floor));

        auto h_at = [&](double t) {
            ComplexMatrix a = delta.matrix();
            a *= cplx(-0.5 * t, 0.0);
            const UnitaryMatrix u = cayley(SkewHermitianMatrix(std::move(a)));
            return trace_pairing(conjugate(u.matrix(), l.matrix()), n.matrix());
        };
        const double fd = (h_at(eps) - h_at(-eps)) / (2.0 * eps);
        result.max_fd_rel_error = std::max(result.max_fd_rel_error, rel(fd, analytic, floor));
    }
    return result;
}

std::vector<Equilibrium> classify_equilibria(std::span<const double> lambda, std::span<const double> n_diag) {
    if (lambda.size() != n_diag.size()) throw DimensionError("classify_equilibria: length mismatch");
    if (lambda.empty() || lambda.size() > 8) throw DimensionError("classify_equilibria: need 1 <= n <= 8");
    require_distinct(lambda, "classify_equilibria");
    require_distinct(n_diag, "classify_equilibria");
    const std::size_t n = lambda.size();
    const RealVector target = similarly_ordered(lambda, n_diag);
    std::vector<std::size_t> sigma(n);
    std::iota(sigma.begin(), sigma.end(), std::size_t{0});
    std::vector<Equilibrium> out;
    do {
        Equilibrium e{PermutationMap(sigma), 0.0, true};
        for (std::size_t i = 0; i < n; ++i) {
            e.trace_ln -= lambda[sigma[i]] * n_diag[i];
            if (lambda[sigma[i]] != target[i]) e.stable = false;
        }
        out.push_back(std::move(e));
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return out;
}

double monge_distance_objective(const SkewHermitianMatrix& l, const SkewHermitianMatrix& n) {
    require_same_size(l, n, "monge_distance_objective");
    const double f = (l.matrix() - n.matrix()).frobenius_norm();
    return f * f;
}

}  // namespace ot
