#pragma once

#include <span>

namespace ot {

class GridFunction;

enum class BracketScheme {
    Centered,  // conservative form with centered differences; conserves the mean exactly
    Arakawa,   // average of the three second-order Jacobians
};

/// out = {x, {x, z}} for the canonical (z, theta) bracket {f,g} = f_z g_theta - f_theta g_z.
/// Theta is periodic; at the z walls the normal flux vanishes.
///
/// The serial version is the reference; the parallel one distributes rows over
/// OpenMP threads and must agree with it bit for bit.
void bracket_rhs_serial(const GridFunction& x, BracketScheme scheme, std::span<double> out);
void bracket_rhs_parallel(const GridFunction& x, BracketScheme scheme, std::span<double> out);

}  // namespace ot
