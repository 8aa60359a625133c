#include <vector>

#include "bracket_stencil.hpp"
#include "ot/errors.hpp"
#include "ot/kernels.hpp"

namespace ot {

void bracket_rhs_parallel(const GridFunction& x, BracketScheme scheme, std::span<double> out) {
    if (out.size() != x.cells()) throw DimensionError("bracket_rhs: output size mismatch");
    if (x.nz() < 2) throw DimensionError("bracket_rhs: need at least two z rows");
    std::vector<double> w(x.cells());
    const auto rows = static_cast<std::ptrdiff_t>(x.nz());
#pragma omp parallel
    {
#pragma omp for schedule(static)
        for (std::ptrdiff_t i = 0; i < rows; ++i) detail::bracket_potential_row(x, static_cast<std::size_t>(i), w);
#pragma omp for schedule(static)
        for (std::ptrdiff_t i = 0; i < rows; ++i) detail::bracket_row(x, scheme, w, static_cast<std::size_t>(i), out);
    }
}

}  // namespace ot
