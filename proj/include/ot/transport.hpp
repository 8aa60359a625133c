#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ot/majorization.hpp"
#include "ot/matrix.hpp"

namespace ot {

/// Finite cost matrix c_ij; rectangular and negative entries allowed.
class CostMatrix {
public:
    explicit CostMatrix(RealMatrix c);

    std::size_t rows() const noexcept { return c_.rows(); }
    std::size_t cols() const noexcept { return c_.cols(); }
    double operator()(std::size_t i, std::size_t j) const noexcept { return c_(i, j); }
    const RealMatrix& matrix() const noexcept { return c_; }

private:
    RealMatrix c_;
};

/// Nonnegative masses with positive total.
class MarginalVector {
public:
    explicit MarginalVector(RealVector mass);
    static MarginalVector uniform(std::size_t n, double total = 1.0);

    std::size_t size() const noexcept { return mass_.size(); }
    double operator[](std::size_t i) const noexcept { return mass_[i]; }
    const RealVector& mass() const noexcept { return mass_; }
    double total() const noexcept;

private:
    RealVector mass_;
};

struct TransportPlan {
    RealMatrix flow;  // mu_ij
    RealVector mu_plus;
    RealVector mu_minus;

    /// max |row sums - mu_plus|, |column sums - mu_minus|
    double marginal_residual() const;
};

/// Sum form: u_i + v_j <= c_ij. Difference form (phi, psi) with
/// phi(x) - psi(y) <= c(x,y) maps to it by phi = u, psi = -v.
struct DualPotentials {
    enum class Form { Sum, Difference };
    RealVector u;
    RealVector v;
    Form form = Form::Sum;

    DualPotentials as_sum_form() const;
    DualPotentials as_difference_form() const;
    /// max_ij (u_i + v_j - c_ij), in sum form; <= 0 when feasible.
    double max_violation(const CostMatrix& c) const;
};

struct MongeSolution {
    PermutationMap assignment;
    double value = 0.0;
};

struct KantorovichSolution {
    TransportPlan plan;
    double value = 0.0;
    DualPotentials potentials;  // from the optimal basis, shifted so v_0 = 0
    std::size_t pivots = 0;
};

struct DualSolution {
    DualPotentials potentials;
    double value = 0.0;
};

/// min over permutations of sum_i c(i, sigma(i)); Hungarian method, O(n^3).
MongeSolution solve_monge(const CostMatrix& cost);
/// Reference: enumerate all n! permutations (n <= 10).
MongeSolution solve_monge_brute_force(const CostMatrix& cost);

/// Transportation simplex: north-west corner start, MODI potentials, Bland's
/// rule for entering and leaving cells. Throws BalanceError when the marginals
/// carry different mass (beyond 1e-9).
KantorovichSolution solve_kantorovich(const CostMatrix& cost, const MarginalVector& mu_plus,
                                      const MarginalVector& mu_minus);

/// Optimal potentials of the dual LP and their value sum u_i mu+_i + sum v_j mu-_j.
DualSolution solve_dual(const CostMatrix& cost, const MarginalVector& mu_plus, const MarginalVector& mu_minus);

struct TripleEqualityReport {
    std::size_t n = 0;
    double monge = 0.0;
    double kantorovich = 0.0;  // uniform marginals 1/n, scaled by n
    double dual = 0.0;         // likewise
    double gap_mk = 0.0;
    double gap_kd = 0.0;
};

TripleEqualityReport verify_triple_equality(const CostMatrix& cost);

struct OrbitInstance {
    CostMatrix cost;          // c_ij = lambda_i * n_j
    DualPotentials candidate; // u_i = lambda_i * n_i, v = 0
    bool candidate_feasible = false;
    /// (i, j) with u_i + v_j > c_ij
    std::vector<std::pair<std::size_t, std::size_t>> violations;
};

OrbitInstance orbit_cost_instance(std::span<const double> lambda, std::span<const double> n_diag);

struct WeakDualityReport {
    double expanded_lhs = 0.0;   // sum_ij a_ij (phi_i - psi_j)
    double collapsed_lhs = 0.0;  // sum_i phi_i - sum_j psi_j
    double rhs = 0.0;            // sum_ij a_ij c_ij
    bool holds = false;          // collapsed_lhs <= rhs + 1e-10
    bool potentials_feasible = false;
    std::size_t violations = 0;
};

/// Evaluates the weak-duality chain for a doubly stochastic A and potentials.
WeakDualityReport k_ge_d_certificate(const DoublyStochasticMatrix& a, const DualPotentials& potentials,
                                     const CostMatrix& cost);

}  // namespace ot
