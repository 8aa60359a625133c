#include <vector>

#include "bracket_stencil.hpp"
#include "ot/errors.hpp"
#include "ot/kernels.hpp"

namespace ot {

void bracket_rhs_serial(const GridFunction& x, BracketScheme scheme, std::span<double> out) {
    if (out.size() != x.cells()) throw DimensionError("bracket_rhs: output size mismatch");
    if (x.nz() < 2) throw DimensionError("bracket_rhs: need at least two z rows");
    std::vector<double> w(x.cells());
    for (std::size_t i = 0; i < x.nz(); ++i) detail::bracket_potential_row(x, i, w);
    for (std::size_t i = 0; i < x.nz(); ++i) detail::bracket_row(x, scheme, w, i, out);
}

}  // namespace ot
