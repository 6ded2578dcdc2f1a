#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "corrbound/errors.hpp"
#include "corrbound/matching.hpp"

using namespace corrbound;

TEST_CASE("min sum assignment on 2x2") {
    CostMatrix c = CostMatrix::from_values(2, {1, 3, 3, 1});
    Assignment a = min_sum_assignment(c);
    CHECK(a.perm == std::vector<int>{0, 1});
    CHECK(a.value_sum == 2.0);
    CHECK(a.value_max == 1.0);
    CHECK(a.max_multiplicity == 2);
}

TEST_CASE("all equal costs are a degenerate tie") {
    CostMatrix c = CostMatrix::from_values(3, std::vector<double>(9, 2.5));
    Assignment a = min_sum_assignment(c);
    CHECK(a.value_sum == doctest::Approx(7.5));
    std::vector<int> sorted = a.perm;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<int>{0, 1, 2});
}

TEST_CASE("bottleneck on the interleaved pair") {
    PointConfig x(2, {Point{{0, 0}}, Point{{2, 0}}});
    PointConfig y(2, {Point{{1, 0}}, Point{{3, 0}}});
    Assignment a = bottleneck_assignment(CostMatrix::from_configs(x, y));
    CHECK(a.value_max == 1.0);
    CHECK(a.value_max_key == 1);
}

TEST_CASE("bottleneck n=1") {
    CostMatrix c = CostMatrix::from_values(1, {4.25});
    CHECK(bottleneck_assignment(c).value_max == 4.25);
}

TEST_CASE("minimal permutation hand example") {
    PointConfig x(1, {Point{{0}}, Point{{5}}});
    PointConfig y(1, {Point{{1}}, Point{{100}}});
    CostMatrix c = CostMatrix::from_configs(x, y);
    Assignment a = minimal_permutation(c);
    CHECK(a.perm == std::vector<int>{0, 1});
    CHECK(a.value_max == 95.0);
    CHECK(a.max_multiplicity == 1);
    CHECK(select_j0(a, c) == 1);
}

TEST_CASE("select_j0 takes the smallest attaining row") {
    CostMatrix c = CostMatrix::from_values(3, {0, 9, 9,
                                               9, 5, 9,
                                               9, 9, 5});
    Assignment a;
    a.perm = {0, 1, 2};
    a.finalize(c);
    CHECK(a.value_max == 5.0);
    CHECK(a.max_multiplicity == 2);
    CHECK(select_j0(a, c) == 1);
}

TEST_CASE("minimal permutation is bottleneck-optimal with least multiplicity") {
    Rng rng(7);
    for (int trial = 0; trial < 120; ++trial) {
        int d = rng.range(1, 3);
        int n = rng.range(1, 6);
        PointConfig x = random_config(rng, n, d, std::max(3, n));
        PointConfig y = random_config(rng, n, d, std::max(3, n));
        CostMatrix c = CostMatrix::from_configs(x, y);
        Assignment a = minimal_permutation(c);

        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        int best_rank = 1 << 30;
        do {
            int rank = 0;
            for (int j = 0; j < n; ++j) rank = std::max(rank, c.rank(j, perm[j]));
            best_rank = std::min(best_rank, rank);
        } while (std::next_permutation(perm.begin(), perm.end()));
        CHECK(a.value_max_key == c.key_at_rank(best_rank));

        // the defining quantifier: no bottleneck-optimal permutation attains
        // the bottleneck fewer times
        std::iota(perm.begin(), perm.end(), 0);
        do {
            int rank = 0;
            for (int j = 0; j < n; ++j) rank = std::max(rank, c.rank(j, perm[j]));
            if (rank != best_rank) continue;
            int mult = 0;
            for (int j = 0; j < n; ++j)
                if (c.rank(j, perm[j]) == rank) ++mult;
            CHECK(a.max_multiplicity <= mult);
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
}

TEST_CASE("solver agrees with enumeration on sums and maxima") {
    Rng rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        int n = rng.range(1, 6);
        std::vector<double> vals(n * n);
        for (auto& v : vals) v = rng.uniform(0, 10);
        CostMatrix c = CostMatrix::from_values(n, vals);
        double best_sum = 1e300, best_max = 1e300;
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        do {
            double s = 0, mx = 0;
            for (int j = 0; j < n; ++j) {
                s += c.cost(j, perm[j]);
                mx = std::max(mx, c.cost(j, perm[j]));
            }
            best_sum = std::min(best_sum, s);
            best_max = std::min(best_max, mx);
        } while (std::next_permutation(perm.begin(), perm.end()));
        CHECK(min_sum_assignment(c).value_sum == doctest::Approx(best_sum).epsilon(1e-12));
        CHECK(bottleneck_assignment(c).value_max == best_max);
    }
}

TEST_CASE("perfect matching invariant under relabeling") {
    Rng rng(9);
    for (int trial = 0; trial < 40; ++trial) {
        int half = rng.range(1, 5);
        PointConfig x = random_config(rng, 2 * half, 2, 6);
        double base = min_weight_perfect_matching(x).value;

        std::vector<Point> shuffled(x.points());
        for (int i = static_cast<int>(shuffled.size()) - 1; i > 0; --i)
            std::swap(shuffled[i], shuffled[rng.range(0, i)]);
        double relabeled = min_weight_perfect_matching(PointConfig(2, shuffled)).value;
        CHECK(base == doctest::Approx(relabeled).epsilon(1e-12));
    }
}

TEST_CASE("perfect matching basics and errors") {
    PointConfig two(1, {Point{{0}}, Point{{9}}});
    Pairing p = min_weight_perfect_matching(two);
    CHECK(p.value == 9.0);
    CHECK(p.pairs.size() == 1);

    PointConfig four(1, {Point{{0}}, Point{{1}}, Point{{10}}, Point{{11}}});
    CHECK(min_weight_perfect_matching(four).value == 2.0);

    PointConfig odd(1, {Point{{0}}, Point{{1}}, Point{{2}}});
    CHECK_THROWS_AS(min_weight_perfect_matching(odd), std::invalid_argument);
    Rng rng(3);
    CHECK_THROWS_AS(min_weight_perfect_matching(random_config(rng, 24, 2, 30)), SizeCapError);
}

TEST_CASE("cost matrix rejects bad input") {
    CHECK_THROWS_AS(CostMatrix::from_values(2, {1, 2, 3}), std::invalid_argument);
    CHECK_THROWS_AS(CostMatrix::from_values(1, {-1}), std::invalid_argument);
}
