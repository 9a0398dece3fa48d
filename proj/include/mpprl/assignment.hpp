#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mpprl {

// Dense similarity matrix between two vertex sets. A value of 0 means
// "no edge": such a pair is never part of an assignment.
struct SimilarityMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;  // row-major

    SimilarityMatrix() = default;
    SimilarityMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

    double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
    double& at(std::size_t i, std::size_t j) { return values[i * cols + j]; }
};

// One-to-one mapping between row and column indices, with the summed
// similarity of the selected pairs.
struct Assignment {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (x, y), x ascending
    double total_similarity = 0.0;
};

namespace detail {

constexpr double kAssignEps = 1e-9;

// O(n^3) Kuhn-Munkres with row/column potentials on the square matrix padded
// from `m`, maximizing total similarity. Returns col index per row, or -1.
// Rows and columns listed in `rs`/`cs` are excluded (already fixed).
inline double km_max(const SimilarityMatrix& m, const std::vector<char>& row_skip,
                     const std::vector<char>& col_skip,
                     std::vector<long>* row_to_col = nullptr) {
    std::vector<std::size_t> rids, cids;
    for (std::size_t i = 0; i < m.rows; ++i)
        if (!row_skip[i]) rids.push_back(i);
    for (std::size_t j = 0; j < m.cols; ++j)
        if (!col_skip[j]) cids.push_back(j);

    const std::size_t n = std::max(rids.size(), cids.size());
    if (row_to_col) row_to_col->assign(m.rows, -1);
    if (n == 0) return 0.0;

    // Minimize negated similarity; padding entries cost 0 (similarity 0).
    auto cost = [&](std::size_t i, std::size_t j) -> double {
        if (i < rids.size() && j < cids.size()) return -m.at(rids[i], cids[j]);
        return 0.0;
    };

    const double inf = std::numeric_limits<double>::infinity();
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
            std::size_t j1 = 0;
            double delta = inf;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
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

    double total = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
        const std::size_t i = p[j];
        if (i == 0) continue;
        if (i - 1 < rids.size() && j - 1 < cids.size()) {
            const double s = m.at(rids[i - 1], cids[j - 1]);
            if (s > 0.0) {
                total += s;
                if (row_to_col) (*row_to_col)[rids[i - 1]] = static_cast<long>(cids[j - 1]);
            }
        }
    }
    return total;
}

// Matrices larger than this skip the lexicographic tie-break refinement;
// the plain KM result (still deterministic for a fixed input) is used.
constexpr std::size_t kLexRefineLimit = 64;

}  // namespace detail

// Maximum-total-similarity one-to-one assignment. Zero-similarity pairs are
// treated as missing edges and never selected; with rows != cols the excess
// vertices stay unmapped. Among equal-total optima the lexicographically
// smallest pair list is returned (for matrices up to kLexRefineLimit rows).
inline Assignment hungarian(const SimilarityMatrix& m) {
    Assignment out;
    if (m.rows == 0 || m.cols == 0) return out;

    std::vector<char> row_skip(m.rows, 0), col_skip(m.cols, 0);
    std::vector<long> raw;
    const double best = detail::km_max(m, row_skip, col_skip, &raw);

    if (m.rows > detail::kLexRefineLimit) {
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (raw[i] >= 0) {
                out.pairs.emplace_back(i, static_cast<std::size_t>(raw[i]));
                out.total_similarity += m.at(i, static_cast<std::size_t>(raw[i]));
            }
        }
        return out;
    }

    // Fix rows one at a time, preferring the smallest column that still
    // allows the optimal total.
    double fixed_total = 0.0;
    for (std::size_t i = 0; i < m.rows; ++i) {
        row_skip[i] = 1;
        bool matched = false;
        for (std::size_t j = 0; j < m.cols && !matched; ++j) {
            if (col_skip[j] || m.at(i, j) <= 0.0) continue;
            col_skip[j] = 1;
            const double rest = detail::km_max(m, row_skip, col_skip);
            if (fixed_total + m.at(i, j) + rest >= best - detail::kAssignEps) {
                fixed_total += m.at(i, j);
                out.pairs.emplace_back(i, j);
                matched = true;
            } else {
                col_skip[j] = 0;
            }
        }
        if (!matched) {
            // Row stays unmapped; the remaining rows must still reach `best`.
        }
    }
    out.total_similarity = fixed_total;
    return out;
}

// Order-dependent baseline: scans the rows in `x_order`, each taking its
// highest-similarity free column (ties to the lowest column index).
inline Assignment greedy(const SimilarityMatrix& m,
                         const std::vector<std::size_t>& x_order) {
    if (x_order.size() != m.rows)
        throw std::invalid_argument("greedy: x_order must permute the rows");
    Assignment out;
    std::vector<char> taken(m.cols, 0);
    for (std::size_t x : x_order) {
        double best = 0.0;
        long best_j = -1;
        for (std::size_t j = 0; j < m.cols; ++j) {
            if (taken[j]) continue;
            const double s = m.at(x, j);
            if (s > 0.0 && s > best) {
                best = s;
                best_j = static_cast<long>(j);
            }
        }
        if (best_j >= 0) {
            taken[static_cast<std::size_t>(best_j)] = 1;
            out.pairs.emplace_back(x, static_cast<std::size_t>(best_j));
            out.total_similarity += best;
        }
    }
    std::sort(out.pairs.begin(), out.pairs.end());
    return out;
}

}  // namespace mpprl
