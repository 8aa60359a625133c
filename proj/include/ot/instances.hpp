#pragma once

#include <cstddef>

#include "ot/linalg.hpp"
#include "ot/majorization.hpp"
#include "ot/random.hpp"

namespace ot {

class GridFunction;

/// Random problem instances. Every generator draws only from the Rng passed in.
namespace instances {

/// Entries uniform in [0, 1).
RealMatrix uniform_cost(std::size_t rows, std::size_t cols, Rng& rng);

/// Real and imaginary parts uniform in [-scale, scale], diagonal real.
HermitianMatrix hermitian(std::size_t n, Rng& rng, double scale = 1.0);
SkewHermitianMatrix skew_hermitian(std::size_t n, Rng& rng, double scale = 1.0);
/// Cayley transform of a random skew-Hermitian matrix with entries of size `spread`.
UnitaryMatrix unitary(std::size_t n, Rng& rng, double spread = 2.0);

/// Random convex combination of `terms` random permutation matrices; exact
/// up to roundoff in the weights.
DoublyStochasticMatrix doubly_stochastic(std::size_t n, std::size_t terms, Rng& rng);
/// Product of `count` random T-transforms.
DoublyStochasticMatrix t_transform_product(std::size_t n, std::size_t count, Rng& rng);

/// n values uniform in [lo, hi).
RealVector uniform_vector(std::size_t n, Rng& rng, double lo = -1.0, double hi = 1.0);
/// n well-separated distinct values: a random permutation of k + U(-0.25, 0.25), k = 1..n.
RealVector separated_vector(std::size_t n, Rng& rng);

/// c_ij = lambda_i * n_j
RealMatrix orbit_cost(std::span<const double> lambda, std::span<const double> n_diag);

/// Cell values uniform in [lo, hi).
GridFunction uniform_grid(std::size_t nz, std::size_t ntheta, Rng& rng, double lo = 0.0, double hi = 1.0);
/// z + amplitude * sin(2 pi theta) * sin(pi z) with a random phase in theta.
GridFunction smooth_monotone_grid(std::size_t nz, std::size_t ntheta, Rng& rng, double amplitude = 0.05);

}  // namespace instances
}  // namespace ot
