#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ot/kernels.hpp"
#include "ot/majorization.hpp"
#include "ot/random.hpp"

namespace ot {

/// Cell-centered samples x(z_i, theta_j) on the annulus [0,1] x S^1, stored
/// row-major with z as the row index. z_i = (i + 1/2)/nz, theta_j = (j + 1/2)/ntheta,
/// each cell of measure 1/(nz * ntheta).
class GridFunction {
public:
    /// Walls at z = 0, 1 carry the no-flux condition dx/dtheta = 0.
    enum class ZBoundary { NoFlux };

    GridFunction(std::size_t nz, std::size_t ntheta, double fill = 0.0);
    GridFunction(std::size_t nz, std::size_t ntheta, RealVector values);

    std::size_t nz() const noexcept { return nz_; }
    std::size_t ntheta() const noexcept { return ntheta_; }
    std::size_t cells() const noexcept { return values_.size(); }
    ZBoundary boundary() const noexcept { return boundary_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return values_[i * ntheta_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * ntheta_ + j]; }
    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }

    double z(std::size_t i) const noexcept { return (static_cast<double>(i) + 0.5) / static_cast<double>(nz_); }
    double theta(std::size_t j) const noexcept { return (static_cast<double>(j) + 0.5) / static_cast<double>(ntheta_); }
    double cell_measure() const noexcept { return 1.0 / static_cast<double>(values_.size()); }

    bool all_finite() const noexcept;
    /// Every row constant in theta.
    bool theta_independent() const noexcept;

    friend bool operator==(const GridFunction&, const GridFunction&) = default;

private:
    std::size_t nz_;
    std::size_t ntheta_;
    RealVector values_;
    ZBoundary boundary_ = ZBoundary::NoFlux;
};

/// A map of grid cells (row-major indices). Invertible maps are bijections,
/// the discrete measure preserving transformations. Non-invertible maps stand
/// in for the Weyl semigroup and act by averaging over their fibers.
class CellMap {
public:
    CellMap(std::vector<std::size_t> mapping, bool invertible);
    static CellMap identity(std::size_t cells);
    static CellMap random_bijection(std::size_t cells, Rng& rng);
    /// Each cell mapped to a uniformly random cell.
    static CellMap random_map(std::size_t cells, Rng& rng);

    std::size_t size() const noexcept { return map_.size(); }
    bool invertible() const noexcept { return invertible_; }
    std::size_t operator[](std::size_t c) const noexcept { return map_[c]; }
    const std::vector<std::size_t>& mapping() const noexcept { return map_; }

    /// Invertible: (x o phi)(c) = x(phi(c)). Otherwise the result at c is the
    /// mean of x over the fiber phi^{-1}(phi(c)), a doubly stochastic averaging.
    GridFunction apply(const GridFunction& x) const;

private:
    std::vector<std::size_t> map_;
    bool invertible_;
};

/// I_p = (1/N) sum_cells x^p for p = 1..p_max, summed in row-major order.
RealVector moments(const GridFunction& x, int p_max);

struct SpectralDecomposition {
    StepFunction profile;  // nz*ntheta equal segments, nonincreasing
    CellMap psi;           // cell -> rank; x(c) = lambda2(psi(c))
};

/// Nonincreasing rearrangement of the cell values. Ties ranked by cell index.
SpectralDecomposition spectral_profile(const GridFunction& x);

/// Grid whose k-th cell in row-major order holds the k-th segment value of a
/// profile with nz*ntheta segments: the discrete lambda_2(z, theta) = lambda(z).
GridFunction lambda2(const StepFunction& profile, std::size_t nz, std::size_t ntheta);

/// pi(x)(z) = mean over theta, one segment per z row.
StepFunction theta_average(const GridFunction& x);

/// Is pi(x) majorized by the spectral profile of x?
StepMajorizationCertificate schur_check(const GridFunction& x, double tol = 1e-12);

struct HornLift {
    GridFunction x;
    double residual_l1 = 0.0;  // |pi(x) - target|_{L1}
    double bound = 0.0;        // 2 * range(profile) / ntheta
};

/// Distributes the profile's segment values over a grid with target.segments()
/// rows so that each row mean approximates the target. The cell values are an
/// exact permutation of the profile values, so every moment is preserved.
/// Throws MajorizationError when the profile does not majorize the target.
HornLift horn_lift(const StepFunction& profile, const StepFunction& target, double tol = 1e-9);

struct MongeMinimizer {
    GridFunction minimizer;
    double cost = 0.0;
};

/// -<x, z> = -(1/N) sum_cells x * z_i
double z_pairing_cost(const GridFunction& x);

/// Rearrangement of x minimizing -<x, z>: values sorted ascending in row-major order.
MongeMinimizer monge_minimizer(const GridFunction& x);

struct PdeOptions {
    double step = 1e-4;
    double t_end = 0.5;
    int direction = -1;  // -1 makes <x, z> increase
    BracketScheme scheme = BracketScheme::Centered;
    std::size_t sample_every = 50;
    double shock_factor = 50.0;
    bool parallel = true;
};

struct PdeSample {
    double t = 0.0;
    double moments[4] = {0, 0, 0, 0};  // I_1..I_4
    double xtheta_norm = 0.0;
    double max_gradient = 0.0;
};

struct PdeTrace {
    std::vector<PdeSample> samples;
    GridFunction final_state;
    std::size_t steps = 0;
    double t_final = 0.0;
    bool shock_detected = false;
};

/// sqrt((1/N) sum x_theta^2), centered periodic differences.
double theta_derivative_norm(const GridFunction& x);
/// max over cells of |grad x| (centered, one-sided at the z walls).
double max_gradient(const GridFunction& x);

/// Classical RK4 on x_t = direction * {x, {x, z}}. Stops early if max |grad x|
/// exceeds shock_factor times its initial value. Throws BlowupError on
/// non-finite states. Requires nz, ntheta >= 8.
PdeTrace integrate_pde(const GridFunction& x0, const PdeOptions& options);

/// First-order upwind for rho_t + rho_z = 0 with zero inflow at z = 0. rho0
/// must have equal segments; step <= dz.
StepFunction advect_density(const StepFunction& rho0, double step, double t_end);

struct AnnulusDual {
    StepFunction alpha;
    double d_value = 0.0;  // -int z alpha(z) dz, value of u(z) = -z alpha(z), v = 0
    double k_value = 0.0;  // -int z lambda(z) dz, cost at the spectral arrangement
    double k_min = 0.0;    // -int z lambda_asc(z) dz, the minimizing rearrangement
    double gap = 0.0;      // k_value - d_value
    bool weak_duality = false;  // d_value <= k_value + 1e-10

    double u(double z) const { return -z * alpha(z); }
};

/// Throws InvariantError when alpha is not a rearrangement of profile.
AnnulusDual annulus_dual(const StepFunction& profile, const StepFunction& alpha, double tol = 1e-12);

struct Atom {
    double position = 0.0;
    double mass = 0.0;
};

/// Splits each segment of a density into `per_segment` equal atoms at the
/// sub-interval midpoints.
std::vector<Atom> density_atoms(const StepFunction& density, std::size_t per_segment);

/// Squared distance d(f+, f-)^2 = inf (1/2) int |x - y|^2 dmu over atom
/// discretizations of both densities, solved with the transportation simplex.
/// Throws BalanceError when total masses differ by more than 1e-9.
double w2_distance(const StepFunction& f_plus, const StepFunction& f_minus, std::size_t atoms_per_segment = 1);

}  // namespace ot
