#include <algorithm>
#include <cmath>

#include "ot/errors.hpp"
#include "ot/majorization.hpp"

namespace ot {

namespace {

// Kuhn's augmenting paths on the support {(i,j) : r(i,j) > tol}. Rows are
// processed in order; a free column of lowest index is taken before any
// augmenting path is tried, so the matching returned is deterministic.
class SupportMatcher {
public:
    SupportMatcher(const RealMatrix& r, double tol) : r_(r), tol_(tol), col_owner_(r.cols(), npos) {}

    bool perfect(std::vector<std::size_t>& row_to_col) {
        const std::size_t n = r_.rows();
        for (std::size_t i = 0; i < n; ++i) {
            visited_.assign(n, false);
            if (!augment(i)) return false;
        }
        row_to_col.assign(n, npos);
        for (std::size_t j = 0; j < n; ++j) row_to_col[col_owner_[j]] = j;
        return true;
    }

private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    bool augment(std::size_t i) {
        for (std::size_t j = 0; j < r_.cols(); ++j)
            if (r_(i, j) > tol_ && col_owner_[j] == npos) {
                col_owner_[j] = i;
                return true;
            }
        for (std::size_t j = 0; j < r_.cols(); ++j) {
            if (r_(i, j) <= tol_ || visited_[j]) continue;
            visited_[j] = true;
            if (col_owner_[j] == npos || augment(col_owner_[j])) {
                col_owner_[j] = i;
                return true;
            }
        }
        return false;
    }

    const RealMatrix& r_;
    double tol_;
    std::vector<std::size_t> col_owner_;
    std::vector<bool> visited_;
};

// A nonzero c with sum_k c_k vec(Pi_k) = 0, found from the reduced row echelon
// form of the n^2 x K incidence matrix. Requires K > rank.
RealVector null_combination(std::span<const BirkhoffTerm> terms, std::size_t n) {
    const std::size_t rows = n * n, cols = terms.size();
    RealMatrix m(rows, cols);
    for (std::size_t k = 0; k < cols; ++k)
        for (std::size_t i = 0; i < n; ++i) m(i * n + terms[k].permutation[i], k) = 1.0;

    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    std::size_t free_col = cols;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        for (std::size_t i = r + 1; i < rows; ++i)
            if (std::abs(m(i, c)) > std::abs(m(piv, c))) piv = i;
        if (std::abs(m(piv, c)) < 1e-9) {
            if (free_col == cols) free_col = c;
            continue;
        }
        for (std::size_t j = 0; j < cols; ++j) std::swap(m(r, j), m(piv, j));
        const double d = m(r, c);
        for (std::size_t j = 0; j < cols; ++j) m(r, j) /= d;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m(i, c) == 0.0) continue;
            const double f = m(i, c);
            for (std::size_t j = 0; j < cols; ++j) m(i, j) -= f * m(r, j);
        }
        pivot_col.push_back(c);
        ++r;
    }
    if (free_col == cols) {
        // Every scanned column was a pivot; the first unscanned one is free.
        if (pivot_col.size() == cols) throw InvariantError("birkhoff_decompose: permutation matrices independent");
        for (std::size_t c = 0; c < cols; ++c)
            if (std::find(pivot_col.begin(), pivot_col.end(), c) == pivot_col.end()) {
                free_col = c;
                break;
            }
    }
    RealVector coef(cols, 0.0);
    coef[free_col] = 1.0;
    for (std::size_t k = 0; k < pivot_col.size(); ++k) coef[pivot_col[k]] = -m(k, free_col);
    return coef;
}

void caratheodory_reduce(std::vector<BirkhoffTerm>& terms, std::size_t n) {
    const std::size_t bound = (n - 1) * (n - 1) + 1;
    while (terms.size() > bound) {
        std::span<BirkhoffTerm> head(terms.data(), bound + 1);
        const RealVector c = null_combination(head, n);
        std::size_t drop = head.size();
        double alpha = 0.0;
        for (std::size_t k = 0; k < head.size(); ++k) {
            if (c[k] <= 1e-12) continue;
            const double a = head[k].weight / c[k];
            if (drop == head.size() || a < alpha) {
                alpha = a;
                drop = k;
            }
        }
        if (drop == head.size()) throw InvariantError("birkhoff_decompose: degenerate Caratheodory step");
        for (std::size_t k = 0; k < head.size(); ++k) head[k].weight -= alpha * c[k];
        head[drop].weight = 0.0;
        std::erase_if(terms, [](const BirkhoffTerm& t) { return t.weight <= 1e-15; });
    }
}

}  // namespace

std::vector<BirkhoffTerm> birkhoff_decompose(const DoublyStochasticMatrix& p, double tol) {
    const std::size_t n = p.size();
    RealMatrix r = p.matrix();
    for (auto& v : r.data())
        if (v <= tol) v = 0.0;

    std::vector<BirkhoffTerm> terms;
    const std::size_t cap = n * n + 1;
    while (r.max_abs() > tol) {
        if (terms.size() >= cap) throw InvariantError("birkhoff_decompose: too many peeling rounds");
        std::vector<std::size_t> sigma;
        SupportMatcher matcher(r, tol);
        if (!matcher.perfect(sigma))
            throw InvariantError("birkhoff_decompose: no perfect matching on the positive support");
        double w = r(0, sigma[0]);
        for (std::size_t i = 1; i < n; ++i) w = std::min(w, r(i, sigma[i]));
        for (std::size_t i = 0; i < n; ++i) r(i, sigma[i]) -= w;
        for (auto& v : r.data())
            if (v <= tol) v = 0.0;
        terms.push_back(BirkhoffTerm{w, PermutationMap(std::move(sigma))});
    }
    caratheodory_reduce(terms, n);
    return terms;
}

RealMatrix birkhoff_resum(std::span<const BirkhoffTerm> terms, std::size_t n) {
    RealMatrix m(n, n);
    for (const auto& t : terms) {
        if (t.permutation.size() != n) throw DimensionError("birkhoff_resum: permutation size mismatch");
        for (std::size_t i = 0; i < n; ++i) m(i, t.permutation[i]) += t.weight;
    }
    return m;
}

}  // namespace ot
