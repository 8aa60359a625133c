#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ot/matrix.hpp"

namespace ot {

/// A bijection of {0, ..., n-1}. As a matrix, Pi(i, sigma(i)) = 1, so
/// (Pi y)_i = y_{sigma(i)}.
class PermutationMap {
public:
    explicit PermutationMap(std::vector<std::size_t> mapping);
    static PermutationMap identity(std::size_t n);

    std::size_t size() const noexcept { return map_.size(); }
    std::size_t operator[](std::size_t i) const noexcept { return map_[i]; }
    const std::vector<std::size_t>& mapping() const noexcept { return map_; }

    PermutationMap inverse() const;
    RealMatrix matrix() const;
    /// (Pi y)_i = y_{sigma(i)}
    RealVector apply(std::span<const double> y) const;

    friend bool operator==(const PermutationMap&, const PermutationMap&) = default;

private:
    std::vector<std::size_t> map_;
};

/// Nonnegative square matrix with unit row and column sums.
class DoublyStochasticMatrix {
public:
    /// Validates entries >= -1e-12 and row/column sums within `tol` of 1.
    explicit DoublyStochasticMatrix(RealMatrix m, double tol = 1e-10);
    static DoublyStochasticMatrix identity(std::size_t n);
    static DoublyStochasticMatrix from_permutation(const PermutationMap& p);

    std::size_t size() const noexcept { return m_.rows(); }
    const RealMatrix& matrix() const noexcept { return m_; }
    RealVector apply(std::span<const double> y) const;

private:
    RealMatrix m_;
};

/// Components sorted nonincreasing (stable).
RealVector decreasing_rearrangement(std::span<const double> x);

/// Indices that sort x nonincreasing, ties by original index.
std::vector<std::size_t> decreasing_order(std::span<const double> x);

struct MajorizationCertificate {
    bool holds = false;
    /// gaps[k-1] = (y*_1 + ... + y*_k) - (x*_1 + ... + x*_k) for k = 1..n;
    /// the last entry is the total-sum gap.
    RealVector gaps;
    /// First failing prefix (1-based), 0 when holds.
    std::size_t failing_prefix = 0;
};

/// Does y majorize x (x < y)? All prefix gaps for k < n must be >= -tol and
/// the total gap within tol of zero.
MajorizationCertificate majorizes(std::span<const double> y, std::span<const double> x, double tol = 1e-9);

/// The T-transform t*I + (1-t)*Q, Q the transposition of coordinates i and j.
struct TTransform {
    std::size_t i = 0;
    std::size_t j = 0;
    double t = 1.0;

    RealMatrix matrix(std::size_t n) const;
    void apply_in_place(std::span<double> z) const;
};

/// P = T_r ... T_1 * Pi_align. The alignment permutation reorders y so that it is
/// ordered like x; the T-transforms then act in x's coordinates.
struct TTransformChain {
    std::size_t n = 0;
    PermutationMap alignment = PermutationMap::identity(0);
    std::vector<TTransform> steps;

    RealMatrix matrix() const;
    DoublyStochasticMatrix doubly_stochastic() const;
    RealVector apply(std::span<const double> y) const;
};

/// Constructs a doubly stochastic P with x = P y from at most n-1 T-transforms,
/// following the Hardy-Littlewood-Polya reduction. Throws MajorizationError if
/// y does not majorize x within `tol`.
TTransformChain t_transform_chain(std::span<const double> x, std::span<const double> y, double tol = 1e-10);

struct BirkhoffTerm {
    double weight = 0.0;
    PermutationMap permutation;
};

/// P = sum_k w_k Pi_k with w_k > 0, sum w_k = 1 and at most (n-1)^2 + 1 terms.
/// Greedy peeling of perfect matchings on the positive support, followed by a
/// Caratheodory reduction when the greedy pass returns too many terms.
/// Throws InvariantError when the support has no perfect matching.
std::vector<BirkhoffTerm> birkhoff_decompose(const DoublyStochasticMatrix& p, double tol = 1e-9);

/// sum_k w_k Pi_k
RealMatrix birkhoff_resum(std::span<const BirkhoffTerm> terms, std::size_t n);

/// P e = e, e' P = e' and P >= 0, each to within tol.
bool is_doubly_stochastic(const RealMatrix& m, double tol = 1e-9);

/// Piecewise-constant function on [0,1]: value values[k] on [t_k, t_{k+1}).
class StepFunction {
public:
    StepFunction(RealVector breakpoints, RealVector values);
    /// m equal-length segments.
    static StepFunction uniform(RealVector values);

    std::size_t segments() const noexcept { return values_.size(); }
    const RealVector& breakpoints() const noexcept { return breaks_; }
    const RealVector& values() const noexcept { return values_; }
    double length(std::size_t k) const noexcept { return breaks_[k + 1] - breaks_[k]; }

    /// Right-continuous evaluation; f(1) is the last value.
    double operator()(double z) const;
    double integral() const;
    /// integral of f^p
    double integral_power(int p) const;
    /// integral of z * f(z)
    double first_moment_z() const;
    bool nonincreasing() const noexcept;

private:
    RealVector breaks_;
    RealVector values_;
};

/// Nonincreasing rearrangement f*(z) = sup{y : |{f > y}| > z}; equal adjacent
/// values are merged.
StepFunction rearrangement_step(const StepFunction& f);

struct StepMajorizationCertificate {
    bool holds = false;
    /// Abscissae s (union of breakpoints of f* and g*) and the gaps
    /// int_0^s f* - int_0^s g* there. The last entry is s = 1.
    RealVector abscissae;
    RealVector gaps;
    double min_gap = 0.0;
};

/// Does f majorize g (g < f)? Cumulative integrals are piecewise linear, so
/// checking them at the merged breakpoints is exact.
StepMajorizationCertificate majorizes_step(const StepFunction& f, const StepFunction& g, double tol = 1e-9);

}  // namespace ot
