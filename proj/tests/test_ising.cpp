#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "corrbound/errors.hpp"
#include "corrbound/ising.hpp"
#include "oracles.hpp"

using namespace corrbound;

TEST_CASE("lattice plumbing") {
    IsingLattice lat({3, 4}, 0.5);
    CHECK(lat.sites() == 12);
    CHECK(lat.edges().size() == 3 * 3 + 2 * 4);  // horizontal + vertical open edges
    CHECK(lat.site_coords(5) == std::vector<std::int64_t>{1, 1});
    CHECK(lat.site_index({1, 1}) == 5);
    CHECK_THROWS_AS(IsingLattice({0}, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(IsingLattice({2}, -0.1), std::invalid_argument);
}

TEST_CASE("two-spin chain equals tanh") {
    for (double beta : {0.1, 0.3, 0.9}) {
        IsingLattice chain({2}, beta);
        CHECK(exact_corr(chain, {0, 1}).mean == doctest::Approx(std::tanh(beta)).epsilon(1e-12));
        CHECK(truncated_two_point(chain, 0, 1) ==
              doctest::Approx(std::tanh(beta)).epsilon(1e-12));
    }
}

TEST_CASE("independent spins at infinite temperature") {
    IsingLattice lat({3, 3}, 0.0);
    CHECK(std::abs(exact_corr(lat, {0, 4}).mean) < 1e-14);
    CHECK(std::abs(u4(lat, 0, 2, 6, 8)) < 1e-14);
    CHECK(std::abs(g2n(lat, {0, 2, 6, 8})) < 1e-14);
    CHECK(truncated_two_point(lat, 1, 1) == 1.0);
}

TEST_CASE("spin flip symmetry on odd products") {
    IsingLattice lat({4, 4}, 0.35);
    CHECK(std::abs(exact_corr(lat, {3}).mean) < 1e-14);
    CHECK(std::abs(exact_corr(lat, {0, 5, 10}).mean) < 1e-14);
}

TEST_CASE("exact enumeration respects the size cap") {
    IsingLattice big({5, 5}, 0.3);
    CHECK_THROWS_AS(exact_corr(big, {0, 1}), SizeCapError);
}

TEST_CASE("monte carlo agrees with exact enumeration") {
    IsingLattice lat({4, 4}, 0.3);
    double exact = exact_corr(lat, {0, 5}).mean;
    CorrelationEstimate metro = mc_corr(lat, {0, 5}, 6000, 500, CorrMethod::metropolis, 99);
    CorrelationEstimate wolff = mc_corr(lat, {0, 5}, 6000, 500, CorrMethod::wolff, 99);
    CHECK(std::abs(metro.mean - exact) <= 3.5 * metro.std_error);
    CHECK(std::abs(wolff.mean - exact) <= 3.5 * wolff.std_error);
    double combined = std::sqrt(metro.std_error * metro.std_error +
                                wolff.std_error * wolff.std_error);
    CHECK(std::abs(metro.mean - wolff.mean) <= 3.5 * combined);
    CHECK(mc_corr(lat, {7, 7}, 100, 10, CorrMethod::metropolis, 1).mean == 1.0);
}

TEST_CASE("mc runs are reproducible for a fixed seed") {
    IsingLattice lat({4, 4}, 0.3);
    CorrelationEstimate a = mc_corr(lat, {0, 5}, 2000, 200, CorrMethod::wolff, 31);
    CorrelationEstimate b = mc_corr(lat, {0, 5}, 2000, 200, CorrMethod::wolff, 31);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
}

TEST_CASE("decay fit closed form on the chain") {
    IsingLattice chain({2}, 0.4);
    DecayFit fit = fit_decay(chain, {{0, 1}});
    CHECK(fit.ok);
    CHECK(fit.mu_hat == doctest::Approx(-std::log(std::tanh(0.4))).epsilon(1e-12));
    CHECK(fit.C_hat == 1.0);
}

TEST_CASE("fitted rate drops toward criticality") {
    std::vector<std::pair<int, int>> pairs;
    IsingLattice probe({4, 4}, 0.1);
    for (int s = 1; s < probe.sites(); ++s) pairs.emplace_back(0, s);
    double prev = 1e300;
    for (double beta : {0.2, 0.3, 0.4}) {
        IsingLattice lat({4, 4}, beta);
        DecayFit fit = fit_decay(lat, pairs);
        CHECK(fit.ok);
        CHECK(fit.mu_hat < prev);
        prev = fit.mu_hat;
    }
}

TEST_CASE("wick pairing sum matches the ordered enumeration") {
    IsingLattice lat({3, 3}, 0.25);
    for (const auto& sites : std::vector<std::vector<int>>{{0, 2, 6, 8}, {0, 1, 4, 7, 5, 8}}) {
        int n2 = static_cast<int>(sites.size());
        std::vector<std::vector<int>> obs;
        for (int i = 0; i < n2; ++i)
            for (int j = 0; j < n2; ++j)
                if (i != j) obs.push_back({sites[i], sites[j]});
        RMatrix two(n2, n2, 0.0);
        auto vals = exact_corr_many(lat, obs);
        int idx = 0;
        for (int i = 0; i < n2; ++i)
            for (int j = 0; j < n2; ++j)
                if (i != j) two(i, j) = vals[idx++];
        // G_2n = 2^{-n} sum over ordered pairings of two-point products
        double direct = oracles::ordered_pairing_enumerated(two) / std::pow(2.0, n2 / 2);
        CHECK(g2n(lat, sites) == doctest::Approx(direct).epsilon(1e-10));
    }
    // G_2 is the plain two-point function
    IsingLattice chain({2}, 0.6);
    CHECK(g2n(chain, {0, 1}) == doctest::Approx(std::tanh(0.6)).epsilon(1e-12));
}

TEST_CASE("u4 tree bound and wick error on a small lattice") {
    IsingLattice lat({3, 3}, 0.3);
    double u = std::abs(u4(lat, 0, 2, 6, 8));
    CHECK(u <= u4_tree_bound(lat, 0, 2, 6, 8) * (1 + 1e-12));
    WickErrorCheck wc = wick_error_check(lat, {0, 2, 6, 8});
    CHECK(wc.gap <= wc.bound * (1 + 1e-12));
    // for 2n = 4 the gap IS |U4|
    CHECK(wc.gap == doctest::Approx(u).epsilon(1e-10));
}

TEST_CASE("thm22 report on a 4x4 window") {
    IsingLattice lat({4, 4}, 0.3);
    std::vector<std::pair<int, int>> pairs;
    for (int s = 1; s < lat.sites(); ++s) pairs.emplace_back(0, s);
    DecayFit fit = fit_decay(lat, pairs);
    REQUIRE(fit.ok);

    BoundReport rep = verify_thm22(lat, {0, 3, 12, 15}, fit);
    CHECK(rep.satisfied);
    CHECK(rep.lhs > 0);  // ferromagnet: even products are positive

    // |A| = 2 reduces to the fitted envelope itself
    BoundReport two = verify_thm22(lat, {0, 15}, fit);
    CHECK(two.satisfied);

    BoundReport odd = verify_thm22(lat, {0, 3, 12}, fit);
    CHECK(odd.params["odd_subset"] == true);
    CHECK(odd.satisfied);
}

TEST_CASE("boundary products obey the explicit pairing bound") {
    IsingLattice lat({4, 4}, 0.3);
    std::vector<std::pair<int, int>> pairs;
    for (int s = 1; s < lat.sites(); ++s) pairs.emplace_back(0, s);
    DecayFit fit = fit_decay(lat, pairs);
    REQUIRE(fit.ok);
    ExplicitConstants consts = ExplicitConstants::make(2, fit.mu_hat);
    for (const auto& tuple :
         std::vector<std::vector<int>>{{0, 3, 15, 12}, {1, 3, 7, 14, 12, 4}}) {
        double lhs = exact_corr(lat, tuple).mean;
        double rhs = thm15_rhs_explicit(lat.sites_config(tuple), fit.C_hat, consts);
        CHECK(lhs <= rhs * (1 + 1e-12));
    }
}

TEST_CASE("boundary pfaffian identity and its negative control") {
    IsingLattice lat({4, 4}, 0.3);
    PfaffianCheck ok = boundary_pfaffian_check(lat, {0, 3, 15, 12});
    CHECK(ok.cyclic_ok);
    CHECK(ok.gap <= 1e-10);

    // a denser boundary tuple, clockwise starting mid-edge
    PfaffianCheck six = boundary_pfaffian_check(lat, {1, 3, 7, 14, 12, 4});
    CHECK(six.cyclic_ok);
    CHECK(six.gap <= 1e-10);

    // reversed orientation is still cyclic
    PfaffianCheck rev = boundary_pfaffian_check(lat, {12, 15, 3, 0});
    CHECK(rev.cyclic_ok);
    CHECK(rev.gap <= 1e-10);

    PfaffianCheck bad = boundary_pfaffian_check(lat, {0, 15, 3, 12});
    CHECK_FALSE(bad.cyclic_ok);
    CHECK(bad.gap > 1e-9);

    // 2n = 2 is trivially the two-point function
    PfaffianCheck two = boundary_pfaffian_check(lat, {0, 3});
    CHECK(two.cyclic_ok);
    CHECK(two.gap <= 1e-14);

    CHECK_THROWS_AS(boundary_pfaffian_check(lat, {0, 5, 15, 12}), std::invalid_argument);
    CHECK_THROWS_AS(boundary_pfaffian_check(IsingLattice({8}, 0.3), {0, 7}),
                    std::invalid_argument);
}

TEST_CASE("correlations grow with the box") {
    double prev = -1;
    for (int side : {2, 3, 4}) {
        IsingLattice lat({side, side}, 0.35);
        double v = exact_corr(lat, {0, 1}).mean;
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
}
