#pragma once

#include <ostream>

namespace ot::cli {

/// Runs one orbit-transport command line. Returns 0 on success, 1 when a
/// checked property fails, 2 on bad input or usage.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ot::cli
