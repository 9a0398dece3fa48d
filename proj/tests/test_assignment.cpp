#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "mpprl/assignment.hpp"

using namespace mpprl;

namespace {

using Pairs = std::vector<std::pair<std::size_t, std::size_t>>;

// Exhaustive maximum-weight matching: each row is either unmatched or takes a
// free positive-similarity column. Also tracks the lexicographically smallest
// optimal pair list. Only usable for tiny matrices.
void brute_rec(const SimilarityMatrix& m, std::size_t row, std::vector<char>& taken,
               Pairs& current, double total, double& best, Pairs& best_pairs) {
    if (row == m.rows) {
        if (total > best + 1e-12) {
            best = total;
            best_pairs = current;
        } else if (total > best - 1e-12 && current < best_pairs) {
            best_pairs = current;
        }
        return;
    }
    brute_rec(m, row + 1, taken, current, total, best, best_pairs);  // row unmatched
    for (std::size_t j = 0; j < m.cols; ++j) {
        if (taken[j] || m.at(row, j) <= 0.0) continue;
        taken[j] = 1;
        current.emplace_back(row, j);
        brute_rec(m, row + 1, taken, current, total + m.at(row, j), best, best_pairs);
        current.pop_back();
        taken[j] = 0;
    }
}

struct BruteResult {
    double total = 0.0;
    Pairs pairs;
};

BruteResult brute_force(const SimilarityMatrix& m) {
    BruteResult out;
    std::vector<char> taken(m.cols, 0);
    Pairs current;
    double best = -1.0;
    brute_rec(m, 0, taken, current, 0.0, best, out.pairs);
    out.total = std::max(0.0, best);
    return out;
}

SimilarityMatrix from_rows(const std::vector<std::vector<double>>& rows) {
    SimilarityMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) m.at(i, j) = rows[i][j];
    return m;
}

std::vector<std::size_t> iota_order(std::size_t n) {
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

}  // namespace

TEST_CASE("greedy commits early while the optimal mapping trades down") {
    const SimilarityMatrix m = from_rows({{0.9, 0.8, 0.0},
                                          {0.9, 0.7, 0.0},
                                          {0.0, 0.0, 0.9}});

    const Assignment g = greedy(m, iota_order(3));
    CHECK(g.total_similarity == Catch::Approx(2.5));
    CHECK(g.pairs == Pairs{{0, 0}, {1, 1}, {2, 2}});

    const Assignment h = hungarian(m);
    CHECK(h.total_similarity == Catch::Approx(2.6));
    CHECK(h.pairs == Pairs{{0, 1}, {1, 0}, {2, 2}});
}

TEST_CASE("identity matrix maps straight through") {
    SimilarityMatrix m(4, 4);
    for (std::size_t i = 0; i < 4; ++i) m.at(i, i) = 1.0;
    const Assignment h = hungarian(m);
    CHECK(h.total_similarity == Catch::Approx(4.0));
    CHECK(h.pairs == Pairs{{0, 0}, {1, 1}, {2, 2}, {3, 3}});
    CHECK(greedy(m, iota_order(4)).pairs == h.pairs);
}

TEST_CASE("zero-similarity pairs are never assigned") {
    SimilarityMatrix m(2, 2);  // all zero
    CHECK(hungarian(m).pairs.empty());
    CHECK(hungarian(m).total_similarity == 0.0);
    CHECK(greedy(m, iota_order(2)).pairs.empty());

    // One positive entry forces exactly one pair even if a "free" zero pair
    // would be available.
    m.at(1, 0) = 0.4;
    const Assignment h = hungarian(m);
    CHECK(h.pairs == Pairs{{1, 0}});
    CHECK(h.total_similarity == Catch::Approx(0.4));
}

TEST_CASE("optimal mapping matches exhaustive search on random matrices") {
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<int> dim(1, 6);
    std::uniform_int_distribution<int> level(0, 10);
    for (int round = 0; round < 400; ++round) {
        SimilarityMatrix m(static_cast<std::size_t>(dim(rng)),
                           static_cast<std::size_t>(dim(rng)));
        for (auto& v : m.values) {
            const int l = level(rng);
            v = l <= 4 ? 0.0 : l / 10.0;  // sparse, with plenty of ties
        }
        const BruteResult expect = brute_force(m);
        const Assignment h = hungarian(m);
        REQUIRE(h.total_similarity == Catch::Approx(expect.total).margin(1e-9));

        double check = 0.0;
        std::vector<char> row_used(m.rows, 0), col_used(m.cols, 0);
        for (const auto& [i, j] : h.pairs) {
            REQUIRE(!row_used[i]);
            REQUIRE(!col_used[j]);
            row_used[i] = col_used[j] = 1;
            REQUIRE(m.at(i, j) > 0.0);
            check += m.at(i, j);
        }
        REQUIRE(check == Catch::Approx(h.total_similarity).margin(1e-9));

        const Assignment g = greedy(m, iota_order(m.rows));
        REQUIRE(g.total_similarity <= h.total_similarity + 1e-9);
    }
}

TEST_CASE("ties break to the lexicographically smallest pair list") {
    CHECK(hungarian(from_rows({{1.0, 1.0}, {1.0, 1.0}})).pairs == Pairs{{0, 0}, {1, 1}});
    CHECK(hungarian(from_rows({{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}})).pairs ==
          Pairs{{0, 0}, {1, 1}});

    std::mt19937_64 rng(777);
    std::uniform_int_distribution<int> level(0, 2);
    for (int round = 0; round < 300; ++round) {
        SimilarityMatrix m(3, 3);
        for (auto& v : m.values) v = level(rng) * 0.5;  // values in {0, 0.5, 1}
        const BruteResult expect = brute_force(m);
        const Assignment h = hungarian(m);
        REQUIRE(h.total_similarity == Catch::Approx(expect.total).margin(1e-9));
        REQUIRE(h.pairs == expect.pairs);
    }
}

TEST_CASE("rectangular matrices leave excess vertices unmapped") {
    const Assignment wide = hungarian(from_rows({{0.9, 0.2, 0.8}}));
    CHECK(wide.pairs == Pairs{{0, 0}});

    const Assignment tall = hungarian(from_rows({{0.3}, {0.9}, {0.5}}));
    CHECK(tall.pairs == Pairs{{1, 0}});
    CHECK(tall.total_similarity == Catch::Approx(0.9));
}

TEST_CASE("greedy consumes rows in the given order") {
    const SimilarityMatrix m = from_rows({{0.9, 0.8}, {0.9, 0.0}});
    CHECK(greedy(m, {0, 1}).pairs == Pairs{{0, 0}});  // row1 left with 0.0: no edge
    CHECK(greedy(m, {0, 1}).total_similarity == Catch::Approx(0.9));
    CHECK(greedy(m, {1, 0}).pairs == Pairs{{0, 1}, {1, 0}});
    CHECK(greedy(m, {1, 0}).total_similarity == Catch::Approx(1.7));
    CHECK_THROWS_AS(greedy(m, {0}), std::invalid_argument);
}

TEST_CASE("large matrices skip the tie-break refinement but stay optimal") {
    std::mt19937_64 rng(31337);
    SimilarityMatrix m(70, 70);  // above the refinement limit
    for (auto& v : m.values) v = (rng() % 100) / 100.0;
    const Assignment h = hungarian(m);

    // sanity: beats greedy and is a valid matching
    const Assignment g = greedy(m, iota_order(70));
    CHECK(h.total_similarity >= g.total_similarity - 1e-9);
    std::vector<char> col_used(70, 0);
    for (const auto& [i, j] : h.pairs) {
        CHECK(!col_used[j]);
        col_used[j] = 1;
    }
}
