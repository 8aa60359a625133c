#include <algorithm>
#include <limits>
#include <numeric>

#include "ot/errors.hpp"
#include "ot/transport.hpp"

namespace ot {

namespace {

double assignment_value(const CostMatrix& cost, const std::vector<std::size_t>& sigma) {
    double value = 0.0;
    for (std::size_t i = 0; i < sigma.size(); ++i) value += cost(i, sigma[i]);
    return value;
}

void require_square(const CostMatrix& cost, const char* who) {
    if (cost.rows() != cost.cols()) throw DimensionError(std::string(who) + ": cost matrix must be square");
}

}  // namespace

MongeSolution solve_monge(const CostMatrix& cost) {
    require_square(cost, "solve_monge");
    const std::size_t n = cost.rows();
    const double inf = std::numeric_limits<double>::infinity();
    // 1-based potentials; p[j] is the row matched to column j, way[] the
    // predecessor column on the shortest augmenting path.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                // Ties go to a free column first, then to the lowest index.
                if (minv[j] < delta || (minv[j] == delta && p[j] == 0 && j1 != 0 && p[j1] != 0)) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> sigma(n);
    for (std::size_t j = 1; j <= n; ++j) sigma[p[j] - 1] = j - 1;
    const double value = assignment_value(cost, sigma);
    return MongeSolution{PermutationMap(std::move(sigma)), value};
}

MongeSolution solve_monge_brute_force(const CostMatrix& cost) {
    require_square(cost, "solve_monge_brute_force");
    const std::size_t n = cost.rows();
    if (n > 10) throw DimensionError("solve_monge_brute_force: n > 10");
    std::vector<std::size_t> sigma(n);
    std::iota(sigma.begin(), sigma.end(), std::size_t{0});
    std::vector<std::size_t> best = sigma;
    double best_value = assignment_value(cost, sigma);
    while (std::next_permutation(sigma.begin(), sigma.end())) {
        const double value = assignment_value(cost, sigma);
        if (value < best_value) {
            best_value = value;
            best = sigma;
        }
    }
    return MongeSolution{PermutationMap(std::move(best)), best_value};
}

}  // namespace ot
