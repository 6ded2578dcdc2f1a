#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "corrbound/cluster.hpp"
#include "corrbound/errors.hpp"

using namespace corrbound;

namespace {

ClusterPartition cluster_for(const PointConfig& x, const PointConfig& y) {
    CostMatrix c = CostMatrix::from_configs(x, y);
    Assignment pi0 = minimal_permutation(c);
    return build_cluster(x, y, pi0, select_j0(pi0, c));
}

}  // namespace

TEST_CASE("single pair has an empty cluster") {
    PointConfig x(1, {Point{{0}}}), y(1, {Point{{4}}});
    ClusterPartition cp = cluster_for(x, y);
    CHECK(cp.cluster_size() == 0);
    CHECK(cp.j0 == 0);
    CHECK(cp.D == 4.0);
}

TEST_CASE("hand-built two-pair cluster") {
    PointConfig x(1, {Point{{0}}, Point{{5}}});
    PointConfig y(1, {Point{{1}}, Point{{100}}});
    ClusterPartition cp = cluster_for(x, y);
    CHECK(cp.j0 == 1);
    CHECK(cp.D == 95.0);
    CHECK(cp.in_cluster[0]);
    CHECK_FALSE(cp.in_cluster[1]);

    BlockPartition bp = block_partition(cp);
    CHECK(bp.top_rows == 2);
    CHECK(bp.left_cols == 1);
    CHECK(bp.row_order == std::vector<int>{1, 0});
    CHECK(bp.col_order == std::vector<int>{0, 1});
    CHECK(bp.RB == std::vector<std::pair<int, int>>{{0, 1}, {1, 1}});
    CHECK(bp.RA.size() + bp.RB.size() + bp.RC.size() + bp.RD.size() == 4);

    DecayKernel k{1.0, 1.0, nullptr};
    double rhs_c = thm12_rhs_cluster(cp, x, y, k);
    double expected = std::sqrt(std::exp(-2.0 * 95) + std::exp(-2.0 * 100));
    CHECK(rhs_c == doctest::Approx(expected).epsilon(1e-12));
    // here every X x Y pair at distance >= D is exactly the R_B set
    CHECK(thm12_rhs_simple(x, y, k) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("far-separated pairs give an empty cluster") {
    PointConfig x(2, {Point{{0, 0}}, Point{{100, 0}}, Point{{0, 100}}});
    PointConfig y(2, {Point{{1, 0}}, Point{{101, 0}}, Point{{1, 100}}});
    ClusterPartition cp = cluster_for(x, y);
    CHECK(cp.cluster_size() == 0);
    BlockPartition bp = block_partition(cp);
    CHECK(bp.top_rows == 1);
    CHECK(bp.left_cols == 0);
}

TEST_CASE("degenerate blocks m=0 and m=n-1") {
    {  // m = 0: the bound is the norm of row j0
        PointConfig x(1, {Point{{0}}}), y(1, {Point{{3}}});
        ClusterPartition cp = cluster_for(x, y);
        BlockPartition bp = block_partition(cp);
        CMatrix m(1, 1, cplx(0.5, 0.0));
        CMatrix pm = permute_to_blocks(m, bp);
        CHECK(bordered_det_bound(pm, bp.top_rows, bp.left_cols) == doctest::Approx(0.5));
    }
    {  // m = n-1: B is a single column
        PointConfig x(1, {Point{{0}}, Point{{5}}});
        PointConfig y(1, {Point{{1}}, Point{{100}}});
        ClusterPartition cp = cluster_for(x, y);
        BlockPartition bp = block_partition(cp);
        CHECK(static_cast<int>(bp.col_order.size()) - bp.left_cols == 1);
    }
}

TEST_CASE("bordered bound on identity blocks") {
    CMatrix eye(2, 2);
    eye(0, 0) = 1;
    eye(1, 1) = 1;
    // declared A = first column of both rows (ell=2, m=1); B is column 2
    double bound = bordered_det_bound(eye, 2, 1);
    CHECK(bound == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(determinant(eye)) <= bound + 1e-9);
}

TEST_CASE("zero B block forces zero determinant") {
    CMatrix m(3, 3);
    m(0, 0) = 0.6;
    m(1, 0) = -0.3;
    m(2, 0) = 0.2;
    m(2, 1) = 0.4;
    m(2, 2) = 0.0;
    // A is rows 0..1 x col 0, B rows 0..1 x cols 1..2 all zero
    double bound = bordered_det_bound(m, 2, 1);
    CHECK(bound == doctest::Approx(0.0));
    CHECK(std::abs(determinant(m)) <= 1e-12);
}

TEST_CASE("bordered bound rejects bad shapes and norms") {
    CMatrix m(2, 2);
    m(0, 0) = 1;
    m(1, 1) = 1;
    CHECK_THROWS_AS(bordered_det_bound(m, 1, 1), std::invalid_argument);
    CMatrix big(2, 2);
    big(0, 0) = 3.0;
    CHECK_THROWS_AS(bordered_det_bound(big, 2, 1), PremiseError);
}

TEST_CASE("empty cluster reduces the rhs to the j0 row") {
    PointConfig x(2, {Point{{0, 0}}, Point{{100, 0}}, Point{{0, 100}}});
    PointConfig y(2, {Point{{1, 0}}, Point{{101, 0}}, Point{{1, 100}}});
    ClusterPartition cp = cluster_for(x, y);
    REQUIRE(cp.cluster_size() == 0);
    DecayKernel k{1.0, 1.0, nullptr};
    double expected = 0;
    for (int kk = 0; kk < 3; ++kk)
        expected += std::exp(-2.0 * dist(x[cp.j0], y[cp.pi0.perm[kk]]));
    CHECK(thm12_rhs_cluster(cp, x, y, k) == doctest::Approx(std::sqrt(expected)));
}

TEST_CASE("block permutation preserves the determinant route") {
    Rng rng(79);
    DecayKernel k{1.0, 1.0, nullptr};
    for (int trial = 0; trial < 60; ++trial) {
        int d = rng.range(1, 3);
        int n = rng.range(2, 7);
        PointConfig x = random_config(rng, n, d, std::max(4, n));
        PointConfig y = random_config(rng, n, d, std::max(4, n));
        CMatrix m = masked_kernel_matrix(x, y, k, rng);
        ClusterPartition cp = cluster_for(x, y);
        BlockPartition bp = block_partition(cp);
        REQUIRE(bp.top_rows == cp.cluster_size() + 1);
        REQUIRE(bp.left_cols == cp.cluster_size());
        REQUIRE(static_cast<int>(bp.RA.size()) ==
                bp.top_rows * bp.left_cols);

        CMatrix pm = permute_to_blocks(m, bp);
        double det = std::abs(determinant(m));
        CHECK(std::abs(determinant(pm)) == doctest::Approx(det).epsilon(1e-10));
        double bnorm = bordered_det_bound(pm, bp.top_rows, bp.left_cols);
        CHECK(det <= bnorm + 1e-9);
        CHECK(bnorm <= thm12_rhs_cluster(cp, x, y, k) * (1 + 1e-9));
    }
}

TEST_CASE("cluster rhs never exceeds simple rhs") {
    Rng rng(77);
    DecayKernel k{1.0, 1.0, nullptr};
    for (int trial = 0; trial < 100; ++trial) {
        int d = rng.range(1, 3);
        int n = rng.range(1, 7);
        PointConfig x = random_config(rng, n, d, std::max(4, n));
        PointConfig y = random_config(rng, n, d, std::max(4, n));
        ClusterPartition cp = cluster_for(x, y);
        CHECK(thm12_rhs_cluster(cp, x, y, k) <= thm12_rhs_simple(x, y, k) * (1 + 1e-12));
    }
}

TEST_CASE("kernel profile K reweights the bound") {
    PointConfig x(1, {Point{{0}}}), y(1, {Point{{9}}});
    DecayKernel sq{2.0, 0.5, [](double r) { return std::sqrt(r); }};
    CHECK(thm12_rhs_simple(x, y, sq) == doctest::Approx(2.0 * std::exp(-0.5 * 3.0)));
    DecayKernel bad{0.0, 1.0, nullptr};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("verify_thm12 on degenerate samplers") {
    PointConfig x(1, {Point{{0}}, Point{{7}}});
    PointConfig y(1, {Point{{1}}, Point{{8}}});
    DecayKernel k{1.0, 0.5, nullptr};

    // constant deterministic matrix: the mean is |det| itself
    CMatrix fixed = [&] {
        Rng rng(5);
        return masked_kernel_matrix(x, y, k, rng);
    }();
    auto constant_sampler = [&](int, double) { return fixed; };
    BoundReport rep = verify_thm12(constant_sampler, x, y, k, 8, {0.0, 1.0});
    CHECK(rep.lhs == doctest::Approx(std::abs(determinant(fixed))));
    CHECK(rep.satisfied);

    auto zero_sampler = [&](int, double) { return CMatrix(2, 2); };
    BoundReport zero = verify_thm12(zero_sampler, x, y, k, 4, {0.0});
    CHECK(zero.lhs == 0.0);
    CHECK(zero.satisfied);

    // an entry premise violation must be flagged
    auto hot_sampler = [&](int, double) {
        CMatrix m(2, 2);
        m(0, 1) = 0.9;  // far above C e^{-mu |x_0 - y_1|}
        return m;
    };
    BoundReport bad = verify_thm12(hot_sampler, x, y, k, 4, {0.0});
    CHECK(bad.provenance["entry_premise_violations"].get<int>() > 0);
    CHECK_FALSE(bad.satisfied);
}

TEST_CASE("masked kernel matrices satisfy both premises") {
    Rng rng(78);
    DecayKernel k{1.0, 0.5, nullptr};
    for (int trial = 0; trial < 50; ++trial) {
        int n = rng.range(1, 7);
        PointConfig x = random_config(rng, n, 2, std::max(3, n));
        PointConfig y = random_config(rng, n, 2, std::max(3, n));
        CMatrix m = masked_kernel_matrix(x, y, k, rng);
        CHECK(spectral_norm(m) <= 1.0 + 1e-9);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                CHECK(std::abs(m(i, j)) <= k.entry_bound(dist(x[i], y[j])) * (1 + 1e-12));
    }
}
