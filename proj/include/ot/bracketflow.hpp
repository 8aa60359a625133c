#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ot/linalg.hpp"
#include "ot/majorization.hpp"

namespace ot {

/// A point on the adjoint orbit: L = Q (i diag(spectrum)) Q^dagger.
struct OrbitState {
    SkewHermitianMatrix L;
    RealVector reference_spectrum;
    UnitaryMatrix Q;
    double time = 0.0;

    static OrbitState from_spectrum(std::span<const double> spectrum, const UnitaryMatrix& q);
    /// Spectrum and frame taken from an eigendecomposition of L/i.
    static OrbitState from_matrix(const SkewHermitianMatrix& l);

    /// max |L - Q Lambda Q^dagger|
    double frame_residual() const;
};

struct FlowSample {
    double t = 0.0;
    double trace_ln = 0.0;   // Tr(LN)
    double comm_norm = 0.0;  // |[L,N]|_F
    double dist_sq = 0.0;    // |L - N|_F^2
    double spec_drift = 0.0; // max |sorted eig(L/i) - reference|
};

struct FlowOptions {
    double step = 0.01;
    double t_end = 100.0;
    int direction = -1;              // +1 follows dL/dt = [L,[L,N]], -1 reverses it
    std::size_t sample_every = 1;    // steps between recorded samples
    double converge_tol = 1e-10;     // stop when |[L,N]|_F <= this
    std::size_t max_steps = 1000000;
};

struct FlowTrace {
    std::vector<FlowSample> samples;
    OrbitState final_state;
    bool converged = false;
    std::size_t steps = 0;
    std::size_t step_halvings = 0;
};

/// [L,[L,N]]
SkewHermitianMatrix double_bracket_rhs(const SkewHermitianMatrix& l, const SkewHermitianMatrix& n);

/// Integrates dL/dt = direction * [L,[L,N]] by Cayley conjugation
/// L <- U L U^dagger, U = cay(-direction * step/2 * [L,N]). Exactly isospectral
/// up to roundoff. The step is halved whenever Tr(LN) moves against the flow.
FlowTrace integrate_flow(const OrbitState& start, const SkewHermitianMatrix& n, const FlowOptions& options);
FlowTrace integrate_flow(const SkewHermitianMatrix& l0, const SkewHermitianMatrix& n, const FlowOptions& options);

/// The direction whose limit pairs lambda with n_diag in the same order.
/// Throws DegeneracyError for repeated entries.
int align_direction(std::span<const double> lambda, std::span<const double> n_diag);

struct GradientCheckResult {
    double max_rel_error = 0.0;     // dH.[L,delta] vs normal-metric pairing
    double max_fd_rel_error = 0.0;  // finite difference of H along the orbit vs analytic
    bool conditioning_warning = false;  // some eigenvalue gap of L/i below 1e-8
};

/// Checks that [L,[L,N]] is the normal-metric gradient of H(L) = Tr(LN) along
/// `num_directions` random tangent vectors [L, delta].
GradientCheckResult gradient_check(const SkewHermitianMatrix& l, const SkewHermitianMatrix& n,
                                   std::size_t num_directions, double eps, std::uint64_t seed = 1);

/// Normal-metric inner product <[L,X],[L,Y]>_n = -Tr(X^L Y^L), with X^L, Y^L
/// recovered from the tangent vectors in the eigenbasis of L.
double normal_metric(const SkewHermitianMatrix& l, const ComplexMatrix& tangent_a, const ComplexMatrix& tangent_b);

struct Equilibrium {
    PermutationMap arrangement;  // L = i diag(lambda[sigma(0)], ..., lambda[sigma(n-1)])
    double trace_ln = 0.0;
    bool stable = false;
};

/// All n! diagonal equilibria with Tr(LN) = -sum lambda_sigma(i) n_i. Stable is
/// the arrangement ordered like n_diag. n <= 8.
std::vector<Equilibrium> classify_equilibria(std::span<const double> lambda, std::span<const double> n_diag);

/// |L - N|_F^2
double monge_distance_objective(const SkewHermitianMatrix& l, const SkewHermitianMatrix& n);

/// lambda rearranged in the order of n_diag (i diag of it is the stable equilibrium).
RealVector similarly_ordered(std::span<const double> lambda, std::span<const double> n_diag);

}  // namespace ot
