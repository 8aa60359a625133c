#include "ot/transport.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>

#include "ot/errors.hpp"

namespace ot {

CostMatrix::CostMatrix(RealMatrix c) : c_(std::move(c)) {
    if (c_.rows() == 0 || c_.cols() == 0) throw DimensionError("CostMatrix: empty");
    if (!c_.all_finite()) throw InvariantError("CostMatrix: non-finite entry");
}

MarginalVector::MarginalVector(RealVector mass) : mass_(std::move(mass)) {
    if (mass_.empty()) throw DimensionError("MarginalVector: empty");
    for (double m : mass_)
        if (!std::isfinite(m) || m < 0.0) throw InvariantError("MarginalVector: masses must be finite and nonnegative");
    if (!(total() > 0.0)) throw InvariantError("MarginalVector: total mass must be positive");
}

MarginalVector MarginalVector::uniform(std::size_t n, double total) {
    return MarginalVector(RealVector(n, total / static_cast<double>(n)));
}

double MarginalVector::total() const noexcept {
    double s = 0.0;
    for (double m : mass_) s += m;
    return s;
}

double TransportPlan::marginal_residual() const {
    double r = 0.0;
    for (std::size_t i = 0; i < flow.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < flow.cols(); ++j) s += flow(i, j);
        r = std::max(r, std::abs(s - mu_plus[i]));
    }
    for (std::size_t j = 0; j < flow.cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < flow.rows(); ++i) s += flow(i, j);
        r = std::max(r, std::abs(s - mu_minus[j]));
    }
    return r;
}

DualPotentials DualPotentials::as_sum_form() const {
    if (form == Form::Sum) return *this;
    DualPotentials out{u, v, Form::Sum};
    for (double& x : out.v) x = -x;
    return out;
}

DualPotentials DualPotentials::as_difference_form() const {
    if (form == Form::Difference) return *this;
    DualPotentials out{u, v, Form::Difference};
    for (double& x : out.v) x = -x;
    return out;
}

double DualPotentials::max_violation(const CostMatrix& c) const {
    const DualPotentials s = as_sum_form();
    if (s.u.size() != c.rows() || s.v.size() != c.cols()) throw DimensionError("DualPotentials: size mismatch with cost");
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < c.rows(); ++i)
        for (std::size_t j = 0; j < c.cols(); ++j) worst = std::max(worst, s.u[i] + s.v[j] - c(i, j));
    return worst;
}

namespace {

/// Basic cells of a transportation tableau, kept as a spanning tree on the
/// bipartite graph rows (0..n-1) + columns (n..n+m-1).
class TransportSimplex {
public:
    TransportSimplex(const CostMatrix& c, const RealVector& supply, const RealVector& demand)
        : c_(c), n_(c.rows()), m_(c.cols()), flow_(n_, m_), basic_(n_ * m_, 0) {
        north_west_corner(supply, demand);
        double scale = 1.0;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < m_; ++j) scale = std::max(scale, std::abs(c_(i, j)));
        tol_ = 1e-12 * scale;
    }

    std::size_t run() {
        const std::size_t cap = 50 * (n_ * m_ + n_ + m_) + 1000;
        std::size_t pivots = 0;
        for (;;) {
            compute_potentials();
            const auto entering = first_improving_cell();
            if (!entering) return pivots;
            if (++pivots > cap) throw ConvergenceError("solve_kantorovich: pivot cap reached", -reduced_cost(*entering));
            pivot(*entering);
        }
    }

    const RealMatrix& flow() const noexcept { return flow_; }
    const RealVector& u() const noexcept { return u_; }
    const RealVector& v() const noexcept { return v_; }

private:
    using Cell = std::size_t;  // i * m + j

    void north_west_corner(RealVector a, RealVector b) {
        std::size_t i = 0, j = 0;
        for (;;) {
            const double x = std::min(a[i], b[j]);
            flow_(i, j) = x;
            basic_[i * m_ + j] = 1;
            a[i] -= x;
            b[j] -= x;
            if (i + 1 == n_ && j + 1 == m_) break;
            if (i + 1 == n_) {
                ++j;
            } else if (j + 1 == m_) {
                ++i;
            } else if (a[i] <= b[j]) {
                ++i;
            } else {
                ++j;
            }
        }
    }

    std::vector<std::vector<std::size_t>> tree() const {
        std::vector<std::vector<std::size_t>> adj(n_ + m_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < m_; ++j)
                if (basic_[i * m_ + j]) {
                    adj[i].push_back(n_ + j);
                    adj[n_ + j].push_back(i);
                }
        return adj;
    }

    void compute_potentials() {
        const auto adj = tree();
        u_.assign(n_, 0.0);
        v_.assign(m_, 0.0);
        std::vector<char> seen(n_ + m_, 0);
        std::deque<std::size_t> queue{0};
        seen[0] = 1;
        while (!queue.empty()) {
            const std::size_t a = queue.front();
            queue.pop_front();
            for (std::size_t b : adj[a]) {
                if (seen[b]) continue;
                seen[b] = 1;
                if (a < n_) {
                    v_[b - n_] = c_(a, b - n_) - u_[a];
                } else {
                    u_[b] = c_(b, a - n_) - v_[a - n_];
                }
                queue.push_back(b);
            }
        }
    }

    double reduced_cost(Cell cell) const {
        const std::size_t i = cell / m_, j = cell % m_;
        return c_(i, j) - u_[i] - v_[j];
    }

    std::optional<Cell> first_improving_cell() const {
        for (Cell cell = 0; cell < n_ * m_; ++cell)
            if (!basic_[cell] && reduced_cost(cell) < -tol_) return cell;
        return std::nullopt;
    }

    void pivot(Cell entering) {
        const std::size_t ei = entering / m_, ej = entering % m_;
        // Tree path from row ei to column ej; the cycle closes through the
        // entering cell. Edges alternate -, +, -, ... starting at row ei.
        const auto adj = tree();
        std::vector<std::size_t> parent(n_ + m_, n_ + m_);
        std::deque<std::size_t> queue{ei};
        parent[ei] = ei;
        while (!queue.empty()) {
            const std::size_t a = queue.front();
            queue.pop_front();
            for (std::size_t b : adj[a])
                if (parent[b] == n_ + m_) {
                    parent[b] = a;
                    queue.push_back(b);
                }
        }
        std::vector<Cell> path;  // cells from column ej back to row ei
        for (std::size_t node = n_ + ej; node != ei; node = parent[node]) {
            const std::size_t prev = parent[node];
            path.push_back(node < n_ ? node * m_ + (prev - n_) : prev * m_ + (node - n_));
        }
        std::reverse(path.begin(), path.end());

        Cell leaving = path[0];
        double theta = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < path.size(); k += 2) {
            const double x = flow_(path[k] / m_, path[k] % m_);
            if (x < theta || (x == theta && path[k] < leaving)) {
                theta = x;
                leaving = path[k];
            }
        }
        for (std::size_t k = 0; k < path.size(); ++k) {
            double& x = flow_(path[k] / m_, path[k] % m_);
            x += (k % 2 == 0) ? -theta : theta;
        }
        flow_(ei, ej) = theta;
        flow_(leaving / m_, leaving % m_) = 0.0;
        basic_[leaving] = 0;
        basic_[entering] = 1;
    }

    const CostMatrix& c_;
    std::size_t n_, m_;
    RealMatrix flow_;
    std::vector<char> basic_;
    RealVector u_, v_;
    double tol_ = 0.0;
};

void check_balance(const MarginalVector& a, const MarginalVector& b) {
    const double gap = a.total() - b.total();
    if (std::abs(gap) > 1e-9) throw BalanceError("unbalanced marginals", gap);
}

}  // namespace

KantorovichSolution solve_kantorovich(const CostMatrix& cost, const MarginalVector& mu_plus,
                                      const MarginalVector& mu_minus) {
    if (mu_plus.size() != cost.rows() || mu_minus.size() != cost.cols())
        throw DimensionError("solve_kantorovich: marginal lengths do not match the cost matrix");
    check_balance(mu_plus, mu_minus);
    TransportSimplex simplex(cost, mu_plus.mass(), mu_minus.mass());
    const std::size_t pivots = simplex.run();

    KantorovichSolution out;
    out.plan = TransportPlan{simplex.flow(), mu_plus.mass(), mu_minus.mass()};
    for (std::size_t i = 0; i < cost.rows(); ++i)
        for (std::size_t j = 0; j < cost.cols(); ++j) out.value += cost(i, j) * out.plan.flow(i, j);
    RealVector u = simplex.u(), v = simplex.v();
    const double shift = v[0];
    for (double& x : u) x += shift;
    for (double& x : v) x -= shift;
    out.potentials = DualPotentials{std::move(u), std::move(v), DualPotentials::Form::Sum};
    out.pivots = pivots;
    return out;
}

DualSolution solve_dual(const CostMatrix& cost, const MarginalVector& mu_plus, const MarginalVector& mu_minus) {
    auto primal = solve_kantorovich(cost, mu_plus, mu_minus);
    DualSolution out{std::move(primal.potentials), 0.0};
    for (std::size_t i = 0; i < mu_plus.size(); ++i) out.value += out.potentials.u[i] * mu_plus[i];
    for (std::size_t j = 0; j < mu_minus.size(); ++j) out.value += out.potentials.v[j] * mu_minus[j];
    return out;
}

TripleEqualityReport verify_triple_equality(const CostMatrix& cost) {
    if (cost.rows() != cost.cols()) throw DimensionError("verify_triple_equality: cost matrix must be square");
    const std::size_t n = cost.rows();
    const double scale = static_cast<double>(n);
    const auto marginal = MarginalVector::uniform(n);
    TripleEqualityReport r;
    r.n = n;
    r.monge = solve_monge(cost).value;
    r.kantorovich = scale * solve_kantorovich(cost, marginal, marginal).value;
    r.dual = scale * solve_dual(cost, marginal, marginal).value;
    r.gap_mk = std::abs(r.monge - r.kantorovich);
    r.gap_kd = std::abs(r.kantorovich - r.dual);
    return r;
}

OrbitInstance orbit_cost_instance(std::span<const double> lambda, std::span<const double> n_diag) {
    if (lambda.size() != n_diag.size() || lambda.empty())
        throw DimensionError("orbit_cost_instance: lambda and n must have equal nonzero length");
    const std::size_t n = lambda.size();
    RealMatrix c(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) c(i, j) = lambda[i] * n_diag[j];
    OrbitInstance out{CostMatrix(std::move(c)), DualPotentials{RealVector(n), RealVector(n, 0.0)}, true, {}};
    for (std::size_t i = 0; i < n; ++i) out.candidate.u[i] = lambda[i] * n_diag[i];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (out.candidate.u[i] + out.candidate.v[j] > out.cost(i, j) + 1e-9) out.violations.emplace_back(i, j);
    out.candidate_feasible = out.violations.empty();
    return out;
}

WeakDualityReport k_ge_d_certificate(const DoublyStochasticMatrix& a, const DualPotentials& potentials,
                                     const CostMatrix& cost) {
    const std::size_t n = a.size();
    if (cost.rows() != n || cost.cols() != n) throw DimensionError("k_ge_d_certificate: size mismatch");
    const DualPotentials d = potentials.as_difference_form();
    if (d.u.size() != n || d.v.size() != n) throw DimensionError("k_ge_d_certificate: potential lengths");
    const auto& m = a.matrix();
    WeakDualityReport r;
    for (std::size_t i = 0; i < n; ++i) {
        r.collapsed_lhs += d.u[i] - d.v[i];
        for (std::size_t j = 0; j < n; ++j) {
            r.expanded_lhs += m(i, j) * (d.u[i] - d.v[j]);
            r.rhs += m(i, j) * cost(i, j);
            if (d.u[i] - d.v[j] > cost(i, j) + 1e-9) ++r.violations;
        }
    }
    r.potentials_feasible = r.violations == 0;
    r.holds = r.collapsed_lhs <= r.rhs + 1e-10 * std::max(1.0, std::abs(r.rhs));
    return r;
}

}  // namespace ot
