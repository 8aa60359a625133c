#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ot {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shapes of operands do not agree.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A value violates the invariant of the type it was meant to populate.
class InvariantError : public Error {
public:
    using Error::Error;
};

/// An iterative method hit its iteration cap.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double residual)
        : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// x is not majorized by y; `index` is the first prefix (1-based k) that fails,
/// or n when only the totals disagree.
class MajorizationError : public Error {
public:
    MajorizationError(const std::string& what, std::size_t index)
        : Error(what + " (prefix " + std::to_string(index) + ")"), index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Source and sink marginals carry different total mass.
class BalanceError : public Error {
public:
    BalanceError(const std::string& what, double gap)
        : Error(what + " (gap " + std::to_string(gap) + ")"), gap_(gap) {}
    double gap() const noexcept { return gap_; }

private:
    double gap_;
};

/// Repeated entries where distinct ones are required.
class DegeneracyError : public Error {
public:
    using Error::Error;
};

/// Numerical blow-up during time stepping; `last_valid_time` is the last
/// time at which the state was finite.
class BlowupError : public Error {
public:
    BlowupError(const std::string& what, double last_valid_time)
        : Error(what + " (last valid t=" + std::to_string(last_valid_time) + ")"),
          last_valid_time_(last_valid_time) {}
    double last_valid_time() const noexcept { return last_valid_time_; }

private:
    double last_valid_time_;
};

}  // namespace ot
