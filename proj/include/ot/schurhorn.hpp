#pragma once

#include <span>

#include "ot/linalg.hpp"
#include "ot/majorization.hpp"

namespace ot {

struct SchurProjection {
    RealVector diagonal;                 // A_ii
    RealVector spectrum;                 // nonincreasing
    DoublyStochasticMatrix witness;      // P_ij = |Q_ij|^2, diagonal = P * spectrum
    MajorizationCertificate certificate;  // spectrum majorizes diagonal
};

/// Diagonal, spectrum and the doubly stochastic witness |Q_ij|^2 of a
/// Hermitian matrix. Eigensolver failures propagate.
SchurProjection schur_projection(const HermitianMatrix& a);

/// Real symmetric matrix with eigenvalues `spectrum` and diagonal `target_diag`
/// (in the caller's order). Built from diag(spectrum) by n-1 plane rotations,
/// each of which pins one diagonal entry to its target. Throws
/// MajorizationError if spectrum does not majorize target_diag within tol.
HermitianMatrix horn_construct(std::span<const double> spectrum, std::span<const double> target_diag,
                               double tol = 1e-10);

/// Is `point` in the convex hull of all permutations of y? Equivalent to y
/// majorizing point.
bool permutohedron_contains(std::span<const double> point, std::span<const double> y, double tol = 1e-9);

}  // namespace ot
