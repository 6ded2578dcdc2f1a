#include "corrbound/selftest.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "corrbound/errors.hpp"

#include "corrbound/anderson.hpp"
#include "corrbound/bounds.hpp"
#include "corrbound/cluster.hpp"
#include "corrbound/geometry.hpp"
#include "corrbound/ising.hpp"
#include "corrbound/matching.hpp"
#include "corrbound/multilinear.hpp"

namespace corrbound {

namespace {

constexpr double kSlack = 1e-12;  // relative slack on exact inequalities

void fail(SuiteResult& r, const std::string& what) { r.failures.push_back(what); }

template <typename T>
std::string str(const T& v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * (1.0 + std::abs(b)); }

}  // namespace

bool SelftestReport::passed() const {
    for (const auto& s : suites)
        if (!s.passed()) return false;
    return true;
}

nlohmann::json SelftestReport::to_json() const {
    nlohmann::json out;
    out["level"] = level;
    out["seed"] = seed;
    out["passed"] = passed();
    out["suites"] = nlohmann::json::array();
    for (const auto& s : suites) out["suites"].push_back(s.to_json());
    return out;
}

std::string SelftestReport::canonical_text() const { return to_json().dump(2) + "\n"; }

// ---------------------------------------------------------------- AC1
SuiteResult suite_distance_oracles(std::uint64_t seed) {
    SuiteResult r;
    r.name = "distance_oracles";
    Rng rng(seed, 101);
    for (int trial = 0; trial < 500; ++trial) {
        int d = rng.range(1, 3);
        int n = rng.range(1, 8);
        std::int64_t extent = std::max<std::int64_t>(rng.range(2, 8), d == 1 ? n : 2);
        PointConfig X = random_config(rng, n, d, extent);
        PointConfig Y = random_config(rng, n, d, extent);
        ++r.cases;

        CostMatrix c = CostMatrix::from_configs(X, Y);
        double ds = min_sum_assignment(c).value_sum;
        double ds_brute = brute_ds(X, Y);
        if (!close(ds, ds_brute, 1e-9))
            fail(r, "D_s mismatch: solver " + str(ds) + " vs brute " + str(ds_brute) +
                        " X=" + X.to_json_text() + " Y=" + Y.to_json_text());
        double dm = bottleneck_assignment(c).value_max;
        double dm_brute = brute_dm(X, Y);
        if (dm != dm_brute)  // both are sqrt of the same exact integer
            fail(r, "D_m mismatch: solver " + str(dm) + " vs brute " + str(dm_brute) +
                        " X=" + X.to_json_text() + " Y=" + Y.to_json_text());

        if (trial % 2 == 0) {
            int half = rng.range(1, 6);
            std::int64_t z_extent = std::max<std::int64_t>(extent, d == 1 ? 2 * half : 2);
            PointConfig Z = random_config(rng, 2 * half, d, z_extent);
            double dsx = min_weight_perfect_matching(Z).value;
            double dsx_brute = brute_ds_pairing(Z);
            if (!close(dsx, dsx_brute, 1e-9))
                fail(r, "D_s(X) mismatch: solver " + str(dsx) + " vs brute " + str(dsx_brute) +
                            " X=" + Z.to_json_text());
        }
    }
    return r;
}

// ---------------------------------------------------------------- AC2
SuiteResult suite_minimal_permutation(std::uint64_t seed) {
    SuiteResult r;
    r.name = "minimal_permutation";
    Rng rng(seed, 102);
    for (int trial = 0; trial < 200; ++trial) {
        int d = rng.range(1, 3);
        int n = rng.range(1, 8);
        std::int64_t extent = std::max<std::int64_t>(rng.range(2, 6), d == 1 ? n : 2);
        PointConfig X = random_config(rng, n, d, extent);
        PointConfig Y = random_config(rng, n, d, extent);
        CostMatrix c = CostMatrix::from_configs(X, Y);
        ++r.cases;

        // brute lexicographic optimum over (bottleneck rank, multiplicity)
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        int best_rank = -1, best_mult = -1;
        do {
            int rank = 0;
            for (int j = 0; j < n; ++j) rank = std::max(rank, c.rank(j, perm[j]));
            int mult = 0;
            for (int j = 0; j < n; ++j)
                if (c.rank(j, perm[j]) == rank) ++mult;
            if (best_rank < 0 || rank < best_rank || (rank == best_rank && mult < best_mult)) {
                best_rank = rank;
                best_mult = mult;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));

        Assignment a = minimal_permutation(c);
        if (a.value_max_key != c.key_at_rank(best_rank) || a.max_multiplicity != best_mult)
            fail(r, "minimal permutation mismatch: got (D_key=" + str(a.value_max_key) +
                        ", N=" + str(a.max_multiplicity) + ") want (D_key=" +
                        str(c.key_at_rank(best_rank)) + ", N=" + str(best_mult) +
                        ") X=" + X.to_json_text() + " Y=" + Y.to_json_text());
    }
    return r;
}

// ---------------------------------------------------------------- AC3
SuiteResult suite_cluster_separation(std::uint64_t seed) {
    SuiteResult r;
    r.name = "cluster_separation";
    Rng rng(seed, 103);
    for (int trial = 0; trial < 200; ++trial) {
        int d = rng.range(1, 3);
        int n = rng.range(1, 8);
        std::int64_t extent = std::max<std::int64_t>(rng.range(2, 6), d == 1 ? n : 2);
        PointConfig X = random_config(rng, n, d, extent);
        PointConfig Y = random_config(rng, n, d, extent);
        CostMatrix c = CostMatrix::from_configs(X, Y);
        ++r.cases;

        Assignment pi0 = minimal_permutation(c);
        int j0 = select_j0(pi0, c);
        ClusterPartition cp;
        try {
            cp = build_cluster(X, Y, pi0, j0);
        } catch (const PremiseError& e) {
            fail(r, std::string("BFS reached j0: ") + e.what() + " X=" + X.to_json_text() +
                        " Y=" + Y.to_json_text());
            continue;
        }
        if (cp.in_cluster[j0]) fail(r, "j0 inside cluster, X=" + X.to_json_text());
        for (int z = 0; z < n; ++z) {
            if (!cp.in_cluster[z]) continue;
            for (int w = 0; w < n; ++w) {
                if (cp.in_cluster[w] || w == j0) continue;
                if (dist_sq(X[z], Y[pi0.perm[w]]) < cp.D_key)
                    fail(r, "separation violated (z in C vs w outside), X=" +
                                X.to_json_text() + " Y=" + Y.to_json_text());
            }
        }
        for (int w = 0; w < n; ++w) {
            if (w == j0 || cp.in_cluster[w]) continue;
            if (dist_sq(X[j0], Y[pi0.perm[w]]) < cp.D_key)
                fail(r, "separation violated (j0 vs w outside), X=" + X.to_json_text() +
                            " Y=" + Y.to_json_text());
        }
    }
    return r;
}

// ---------------------------------------------------------------- AC4
SuiteResult suite_bordered_determinant(std::uint64_t seed) {
    SuiteResult r;
    r.name = "bordered_determinant";
    Rng rng(seed, 104);
    for (int trial = 0; trial < 500; ++trial) {
        int p = rng.range(2, 12);
        int ell = rng.range(1, p);
        int m = rng.range(0, ell - 1);
        CMatrix mat(p, p);
        for (auto& e : mat.data()) e = cplx(rng.normal(), rng.normal());
        double norm = spectral_norm(mat);
        if (norm > 0)
            for (auto& e : mat.data()) e /= norm * (1.0 + 1e-12);
        ++r.cases;
        double det = std::abs(determinant(mat));
        double bound = bordered_det_bound(mat, ell, m);
        if (det > bound + 1e-9)
            fail(r, "bordered bound violated: |det|=" + str(det) + " > ||B||=" + str(bound) +
                        " (p=" + str(p) + ", ell=" + str(ell) + ", m=" + str(m) + ")");
    }
    return r;
}

// ---------------------------------------------------------------- AC5
SuiteResult suite_thm12_deterministic(std::uint64_t seed) {
    SuiteResult r;
    r.name = "thm12_deterministic";
    Rng rng(seed, 105);
    for (int trial = 0; trial < 200; ++trial) {
        int d = rng.range(1, 3);
        int n = rng.range(1, 8);
        std::int64_t extent = std::max<std::int64_t>(rng.range(2, 6), d == 1 ? n : 2);
        double mu = trial % 2 == 0 ? 0.5 : 1.0;
        PointConfig X = random_config(rng, n, d, extent);
        PointConfig Y = random_config(rng, n, d, extent);
        DecayKernel kernel{.C = 1.0, .mu = mu, .K = nullptr};
        CMatrix m = masked_kernel_matrix(X, Y, kernel, rng);
        ++r.cases;

        CostMatrix c = CostMatrix::from_configs(X, Y);
        Assignment pi0 = minimal_permutation(c);
        ClusterPartition cp = build_cluster(X, Y, pi0, select_j0(pi0, c));
        double det = std::abs(determinant(m));
        double rhs_c = thm12_rhs_cluster(cp, X, Y, kernel);
        double rhs_s = thm12_rhs_simple(X, Y, kernel);
        if (det > rhs_c * (1.0 + kSlack))
            fail(r, "det exceeds cluster RHS: " + str(det) + " > " + str(rhs_c) +
                        " X=" + X.to_json_text() + " Y=" + Y.to_json_text());
        if (rhs_c > rhs_s * (1.0 + kSlack))
            fail(r, "cluster RHS exceeds simple RHS: " + str(rhs_c) + " > " + str(rhs_s) +
                        " X=" + X.to_json_text() + " Y=" + Y.to_json_text());
    }
    return r;
}

// ---------------------------------------------------------------- AC6
SuiteResult suite_thm13_explicit(std::uint64_t seed) {
    SuiteResult r;
    r.name = "thm13_explicit";
    Rng rng(seed, 106);
    for (double mu : {0.5, 1.0, 2.0})
        for (int d = 1; d <= 3; ++d) {
            ExplicitConstants consts = ExplicitConstants::make(d, mu);
            for (int n = 1; n <= 7; ++n) {
                for (int trial = 0; trial < 200; ++trial) {
                    std::int64_t extent = std::max<std::int64_t>(rng.range(2, 6), d == 1 ? n : 2);
                    PointConfig X = random_config(rng, n, d, extent);
                    PointConfig Y = random_config(rng, n, d, extent);
                    ++r.cases;
                    double lhs = abs_permanent(kernel_matrix(X, Y, mu));
                    double rhs = thm13_rhs_explicit(X, Y, 1.0, consts);
                    if (lhs > rhs * (1.0 + kSlack))
                        fail(r, "thm13 violated: perm=" + str(lhs) + " > rhs=" + str(rhs) +
                                    " mu=" + str(mu) + " X=" + X.to_json_text() +
                                    " Y=" + Y.to_json_text());
                }
            }
        }
    return r;
}

// ---------------------------------------------------------------- AC7
SuiteResult suite_counting_lemma(std::uint64_t seed) {
    SuiteResult r;
    r.name = "counting_lemma";
    Rng rng(seed, 107);
    std::uint64_t factorial[9] = {1, 1, 2, 6, 24, 120, 720, 5040, 40320};
    for (int trial = 0; trial < 100; ++trial) {
        int d = rng.range(1, 3);
        int n = rng.range(2, 6);
        std::int64_t extent = std::max<std::int64_t>(rng.range(2, 6), d == 1 ? n : 2);
        PointConfig X = random_config(rng, n, d, extent);
        PointConfig Y = random_config(rng, n, d, extent);
        ++r.cases;
        auto counts = enumerate_Ml_all(X, Y);
        std::uint64_t total = 0;
        for (const auto& [l, count] : counts) {
            total += count;
            if (static_cast<double>(count) > counting_bound(l, n, d) * (1.0 + kSlack))
                fail(r, "counting bound violated at l=" + str(l) + ": " + str(count) + " > " +
                            str(counting_bound(l, n, d)) + " X=" + X.to_json_text() +
                            " Y=" + Y.to_json_text());
        }
        if (total != factorial[n])
            fail(r, "counts do not partition S_n: sum=" + str(total) + " n=" + str(n));
    }
    return r;
}

// ---------------------------------------------------------------- AC8
SuiteResult suite_thm15_pairing(std::uint64_t seed) {
    SuiteResult r;
    r.name = "thm15_pairing";
    Rng rng(seed, 108);
    for (int trial = 0; trial < 100; ++trial) {
        int d = rng.range(1, 3);
        int half = rng.range(1, 5);
        std::int64_t extent = std::max<std::int64_t>(rng.range(2, 6), d == 1 ? 2 * half : 2);
        double mu = trial % 2 == 0 ? 0.5 : 1.0;
        PointConfig X = random_config(rng, 2 * half, d, extent);
        ++r.cases;
        ExplicitConstants consts = ExplicitConstants::make(d, mu);
        double lhs = pairing_sum(kernel_matrix(X, mu));
        double rhs = thm15_rhs_explicit(X, 1.0, consts);
        if (lhs > rhs * (1.0 + kSlack))
            fail(r, "thm15 violated: pairing=" + str(lhs) + " > rhs=" + str(rhs) +
                        " mu=" + str(mu) + " X=" + X.to_json_text());
    }
    // Pfaffian identity pf^2 = det on random skew matrices
    for (int trial = 0; trial < 60; ++trial) {
        int half = rng.range(1, 6);
        int n = 2 * half;
        RMatrix skew(n, n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                double v = rng.normal();
                skew(i, j) = v;
                skew(j, i) = -v;
            }
        ++r.cases;
        double pf = pfaffian(skew);
        double det = determinant(skew);
        if (!close(pf * pf, det, 1e-8))
            fail(r, "pf^2 != det: " + str(pf * pf) + " vs " + str(det) + " (2n=" + str(n) + ")");
    }
    return r;
}

// ---------------------------------------------------------------- AC9
SuiteResult suite_ising_exact(std::uint64_t seed) {
    SuiteResult r;
    r.name = "ising_exact";
    (void)seed;  // the battery is fully deterministic

    {  // two-site chain: <s1 s2> = tanh(beta)
        IsingLattice chain({2}, 0.3);
        double got = exact_corr(chain, {0, 1}).mean;
        ++r.cases;
        if (!close(got, std::tanh(0.3), 1e-12))
            fail(r, "2-chain correlation: got " + str(got) + " want tanh(0.3)=" +
                        str(std::tanh(0.3)));
    }

    IsingLattice lat({4, 4}, 0.3);

    {  // spin-flip symmetry kills odd products
        for (const auto& A : std::vector<std::vector<int>>{{5}, {0, 6, 11}, {1, 2, 7, 12, 13}}) {
            ++r.cases;
            double v = exact_corr(lat, A).mean;
            if (std::abs(v) > 1e-14)
                fail(r, "odd product not zero: |" + str(v) + "| sites=" + str(A.size()));
        }
    }

    {  // tree bound for U4, two site sets
        for (const auto& S :
             std::vector<std::array<int, 4>>{{0, 3, 12, 15}, {0, 1, 5, 10}, {2, 7, 8, 13}}) {
            ++r.cases;
            double u = std::abs(u4(lat, S[0], S[1], S[2], S[3]));
            double bound = u4_tree_bound(lat, S[0], S[1], S[2], S[3]);
            if (u > bound * (1.0 + kSlack))
                fail(r, "U4 tree bound violated: " + str(u) + " > " + str(bound));
        }
    }

    {  // boundary Pfaffian identity, corners in cyclic order
        PfaffianCheck ok = boundary_pfaffian_check(lat, {0, 3, 15, 12});
        ++r.cases;
        if (!ok.cyclic_ok) fail(r, "corner tuple not recognized as cyclic");
        if (ok.gap > 1e-10)
            fail(r, "boundary Pfaffian gap too large: " + str(ok.gap));
        // negative control: scrambled order must fail the identity
        PfaffianCheck bad = boundary_pfaffian_check(lat, {0, 15, 3, 12});
        ++r.cases;
        if (bad.cyclic_ok) fail(r, "scrambled tuple mis-detected as cyclic");
        if (bad.gap <= 1e-9)
            fail(r, "negative control gap unexpectedly small: " + str(bad.gap));
        r.info["pfaffian_gap_cyclic"] = ok.gap;
        r.info["pfaffian_gap_scrambled"] = bad.gap;
    }

    {  // fitted envelope + explicit pairing bound
        std::vector<std::pair<int, int>> pairs;
        for (int s = 1; s < lat.sites(); ++s) pairs.emplace_back(0, s);
        pairs.emplace_back(5, 10);
        pairs.emplace_back(4, 11);
        DecayFit fit = fit_decay(lat, pairs);
        ++r.cases;
        if (!fit.ok) fail(r, "decay fit rejected on 4x4 at beta=0.3");
        BoundReport rep = verify_thm22(lat, {0, 3, 12, 15}, fit);
        ++r.cases;
        if (!rep.satisfied)
            fail(r, "thm22 violated: lhs=" + str(rep.lhs) + " rhs=" + str(rep.rhs));
        r.info["mu_hat"] = fit.mu_hat;
        r.info["thm22_lhs"] = rep.lhs;
        r.info["thm22_rhs"] = rep.rhs;
    }

    {  // Wick error estimate, exact both sides
        WickErrorCheck wc = wick_error_check(lat, {0, 3, 12, 15});
        ++r.cases;
        if (wc.gap > wc.bound * (1.0 + kSlack))
            fail(r, "Wick error bound violated: " + str(wc.gap) + " > " + str(wc.bound));
    }

    {  // correlations increase with the box (ferromagnet, h = 0)
        double prev = -1;
        for (int side : {2, 3, 4}) {
            IsingLattice box({side, side}, 0.3);
            double v = exact_corr(box, {0, 1}).mean;
            ++r.cases;
            if (v + 1e-12 < prev)
                fail(r, "monotonicity in volume violated at side=" + str(side));
            prev = v;
        }
    }
    return r;
}

// ---------------------------------------------------------------- AC10
SuiteResult suite_anderson(std::uint64_t seed) {
    SuiteResult r;
    r.name = "anderson_localization";
    AndersonModel model{.d = 1, .L = 64, .W = 8.0, .seed = seed};
    const int samples = 200;
    std::vector<double> t_grid;
    for (int i = 0; i <= 40; ++i) t_grid.push_back(0.5 * i);

    std::vector<std::pair<int, int>> fit_pairs;
    for (int base : {8, 20, 32})
        for (int off : {1, 2, 3, 4, 6, 8, 11, 14, 18, 22, 27, 32, 38, 44, 50, 56})
            if (base + off < 64) fit_pairs.emplace_back(base, base + off);

    {  // unitarity of the evolution rows
        Spectrum spec = diagonalize(build_hamiltonian(model, 0));
        for (int x : {0, 32})
            for (double t : {0.0, 1.7, 13.3}) {
                double total = 0;
                for (int y = 0; y < model.sites(); ++y)
                    total += std::norm(amplitude(spec, x, y, t));
                ++r.cases;
                if (std::abs(total - 1.0) > 1e-8)
                    fail(r, "unitarity defect " + str(std::abs(total - 1.0)) + " at t=" + str(t));
            }
    }

    DleFit fit = dle_fit(model, samples, fit_pairs, t_grid);
    ++r.cases;
    if (fit.domination_violations != 0)
        fail(r, "correlator fails to dominate the t-grid sup " +
                    str(fit.domination_violations) + " times");
    ++r.cases;
    if (!fit.localized || fit.mu_hat <= 0 || fit.ci_lo <= 0)
        fail(r, "DLE fit not localized: mu_hat=" + str(fit.mu_hat) + " CI=[" + str(fit.ci_lo) +
                    "," + str(fit.ci_hi) + "]");
    r.info["mu_hat"] = fit.mu_hat;
    r.info["C_hat"] = fit.C_hat;
    r.info["mu_ci"] = {fit.ci_lo, fit.ci_hi};

    {  // MPDL reports over random config draws with the fitted kernel
        DecayKernel kernel{.C = fit.C_hat, .mu = fit.mu_hat, .K = nullptr};
        Rng rng(seed, 110);
        std::vector<ConfigDraw> draws;
        for (int i = 0; i < 100; ++i) {
            int n = rng.range(2, 3);
            ConfigDraw dr;
            while (static_cast<int>(dr.x_sites.size()) < n) {
                int s = static_cast<int>(rng.below(64));
                if (std::find(dr.x_sites.begin(), dr.x_sites.end(), s) == dr.x_sites.end())
                    dr.x_sites.push_back(s);
            }
            while (static_cast<int>(dr.y_sites.size()) < n) {
                int s = static_cast<int>(rng.below(64));
                if (std::find(dr.y_sites.begin(), dr.y_sites.end(), s) == dr.y_sites.end())
                    dr.y_sites.push_back(s);
            }
            draws.push_back(std::move(dr));
        }
        std::vector<BoundReport> reports = mpdl_batch(model, draws, samples, t_grid, kernel);
        int satisfied = 0;
        for (const auto& rep : reports)
            if (rep.satisfied) ++satisfied;
        ++r.cases;
        if (satisfied < 95)
            fail(r, "MPDL satisfied on only " + str(satisfied) + "/100 draws");
        r.info["mpdl_satisfied"] = satisfied;
    }

    {  // Q statistic: pointwise bound, finiteness, stability under R growth
        double mu = fit.mu_hat;
        double q16_mean = 0, q32_mean = 0, q48_mean = 0;
        int nq = 10;
        bool pointwise_ok = true;
        for (int s = 0; s < nq; ++s) {
            Spectrum spec = diagonalize(build_hamiltonian(model, s));
            double q32 = q_statistic(model, spec, mu, 32.0);
            q16_mean += q_statistic(model, spec, mu, 16.0) / nq;
            q32_mean += q32 / nq;
            q48_mean += q_statistic(model, spec, mu, 48.0) / nq;
            if (pointwise_bound_worst_ratio(model, spec, mu, 32.0, q32) > 1.0 + kSlack)
                pointwise_ok = false;
        }
        ++r.cases;
        if (!pointwise_ok) fail(r, "pointwise two-point bound with C=Q violated");
        // terms are nonnegative, so Q grows with R; stability means the
        // increments shrink as the radius doubles
        ++r.cases;
        if (!std::isfinite(q48_mean) ||
            q48_mean - q32_mean >= q32_mean - q16_mean)
            fail(r, "Q tail not shrinking under R growth: " + str(q16_mean) + " -> " +
                        str(q32_mean) + " -> " + str(q48_mean));
        r.info["q_mean_R16_R32_R48"] = {q16_mean, q32_mean, q48_mean};

        // almost-sure determinant bound per realization with C_omega = Q
        Rng rng(seed, 111);
        std::vector<double> lambda_grid{-2.0, -1.0, 0.0, 1.0, 2.0};
        for (int s = 0; s < 5; ++s) {
            Spectrum spec = diagonalize(build_hamiltonian(model, s));
            BoundReport rep = verify_loc_realization(model, spec, {20, 27, 35}, {22, 30, 41},
                                                     mu, 32.0, t_grid, lambda_grid, rng);
            ++r.cases;
            if (!rep.satisfied)
                fail(r, "a.s. determinant bound violated at sample " + str(s) +
                            ": lhs=" + str(rep.lhs) + " rhs=" + str(rep.rhs));
        }
    }

    {  // ULE diagnostic: localized at strong disorder, rejected for W = 0
        AndersonModel strong{.d = 1, .L = 64, .W = 10.0, .seed = seed};
        Spectrum spec = diagonalize(build_hamiltonian(strong, 1));
        UleDiagnostic diag = ule_diagnostic(strong, spec);
        ++r.cases;
        if (!diag.holds || diag.mu <= 0)
            fail(r, "ULE envelope not found at W=10");
        r.info["ule_mu"] = diag.mu;
        r.info["ule_C"] = diag.C;

        AndersonModel free{.d = 1, .L = 64, .W = 0.0, .seed = seed};
        Spectrum fspec = diagonalize(build_hamiltonian(free, 1));
        UleDiagnostic fdiag = ule_diagnostic(free, fspec);
        ++r.cases;
        if (fdiag.holds) fail(r, "ULE envelope reported for the free Laplacian");

        // uniform multi-point bound from the eigenfunction envelope
        if (diag.holds) {
            double env_c = correlator_envelope_C(strong, spec, diag.mu);
            ExplicitConstants consts = ExplicitConstants::make(1, diag.mu);
            std::vector<int> xs{20, 28, 37}, ys{23, 31, 40};
            PointConfig X = [&] {
                std::vector<Point> pts;
                for (int s : xs) pts.push_back(strong.site_point(s));
                return PointConfig(1, std::move(pts));
            }();
            PointConfig Y = [&] {
                std::vector<Point> pts;
                for (int s : ys) pts.push_back(strong.site_point(s));
                return PointConfig(1, std::move(pts));
            }();
            double rhs = thm13_rhs_explicit(X, Y, env_c, consts);
            for (double t : {0.0, 2.5, 7.0, 19.5}) {
                CMatrix m(3, 3);
                for (int j = 0; j < 3; ++j)
                    for (int k = 0; k < 3; ++k) m(j, k) = amplitude(spec, xs[j], ys[k], t);
                ++r.cases;
                double det = std::abs(determinant(m));
                if (det > rhs * (1.0 + kSlack))
                    fail(r, "uniform multi-point bound violated at t=" + str(t) + ": " +
                                str(det) + " > " + str(rhs));
            }
        }
    }
    return r;
}

// ------------------------------------------------------- quick battery
SuiteResult suite_quick_analytic(std::uint64_t seed) {
    SuiteResult r;
    r.name = "quick_analytic";
    (void)seed;
    auto expect = [&](bool ok, const std::string& what) {
        ++r.cases;
        if (!ok) fail(r, what);
    };

    Point a{{0, 0}}, b{{3, 4}};
    expect(dist(a, b) == 5.0, "3-4-5 Euclidean distance");
    expect(dist(a, b, Metric::sup) == 4.0, "sup distance");
    expect(dist(a, a) == 0.0, "identity distance");

    PointConfig X1(1, {Point{{0}}, Point{{2}}});
    PointConfig Y1(1, {Point{{1}}, Point{{3}}});
    expect(hausdorff_distance(X1, Y1) == 1.0, "hausdorff of interleaved pairs");
    expect(brute_dm(X1, Y1) == 1.0, "brute D_m");
    expect(brute_ds(X1, Y1) == 2.0, "brute D_s");

    PointConfig Z(1, {Point{{0}}, Point{{1}}, Point{{10}}, Point{{11}}});
    expect(brute_ds_pairing(Z) == 2.0, "brute pairing over 3 pairings");

    CostMatrix c22 = CostMatrix::from_values(2, {1, 3, 3, 1});
    Assignment a22 = min_sum_assignment(c22);
    expect(a22.perm == std::vector<int>{0, 1} && a22.value_sum == 2.0, "2x2 min-sum");

    expect(std::abs(determinant(to_complex(kernel_matrix(
               PointConfig(1, {Point{{0}}}), 1.0)))) > 0, "kernel determinant nonzero");

    RMatrix eye(3, 3, 0.0);
    for (int i = 0; i < 3; ++i) eye(i, i) = 1.0;
    expect(determinant(eye) == 1.0, "identity determinant");
    expect(abs_permanent(eye) == 1.0, "identity permanent");

    RMatrix ones(4, 4, 1.0);
    expect(close(pairing_sum(ones), 12.0, 1e-12), "all-ones pairing sum 2^2 * 3");

    RMatrix sk(2, 2, 0.0);
    sk(0, 1) = 2.5;
    sk(1, 0) = -2.5;
    expect(pfaffian(sk) == 2.5, "2x2 Pfaffian");

    double B = compute_B(1, 2.0);
    expect(std::abs(std::log(3 * B) - B) < 1e-8 || B == 1.0, "B defining equation d=1 mu=2");
    expect(sl_cardinality(2, 2) == 3, "stars and bars (2,2)");
    expect(sl_cardinality(0, 5) == 1, "stars and bars (0,n)");
    expect(sl_cardinality(5, 3) == 21, "stars and bars (5,3)");

    IsingLattice chain({2}, 0.7);
    expect(close(exact_corr(chain, {0, 1}).mean, std::tanh(0.7), 1e-12), "tanh identity");
    IsingLattice beta0({3, 3}, 0.0);
    expect(std::abs(exact_corr(beta0, {0, 5}).mean) < 1e-14, "independent spins at beta=0");
    expect(exact_corr(beta0, {4, 4}).mean == 1.0, "sigma^2 = 1");

    AndersonModel tiny{.d = 1, .L = 2, .W = 0.0, .seed = 1};
    RMatrix h = build_hamiltonian(tiny, 0);
    expect(h(0, 0) == 0 && h(0, 1) == -1 && h(1, 0) == -1 && h(1, 1) == 0,
           "free 2-site Hamiltonian");
    Spectrum spec = diagonalize(h);
    expect(std::abs(amplitude(spec, 0, 0, 0.0) - 1.0) < 1e-12, "t=0 diagonal amplitude");
    expect(std::abs(amplitude(spec, 0, 1, 0.0)) < 1e-12, "t=0 off-diagonal amplitude");
    return r;
}

SelftestReport run_selftest(const std::string& level, std::uint64_t seed) {
    SelftestReport report;
    report.level = level;
    report.seed = seed;

    using Suite = SuiteResult (*)(std::uint64_t);
    std::vector<Suite> suites{suite_quick_analytic};
    if (level == "full") {
        suites = {suite_quick_analytic,     suite_distance_oracles, suite_minimal_permutation,
                  suite_cluster_separation, suite_bordered_determinant,
                  suite_thm12_deterministic, suite_thm13_explicit,  suite_counting_lemma,
                  suite_thm15_pairing,      suite_ising_exact,      suite_anderson};
    } else if (level != "quick") {
        throw ConfigError("selftest level must be 'quick' or 'full'");
    }

    for (Suite s : suites) {
        auto start = std::chrono::steady_clock::now();
        SuiteResult res = s(seed);
        res.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
        report.suites.push_back(std::move(res));
    }
    return report;
}

}  // namespace corrbound
