// corrbound - symmetrized configuration distances, determinant/permanent/
// Pfaffian decay bounds with explicit constants, and the Ising/Anderson
// simulation checks behind them.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "corrbound/anderson.hpp"
#include "corrbound/bounds.hpp"
#include "corrbound/cluster.hpp"
#include "corrbound/errors.hpp"
#include "corrbound/geometry.hpp"
#include "corrbound/ising.hpp"
#include "corrbound/matching.hpp"
#include "corrbound/multilinear.hpp"
#include "corrbound/selftest.hpp"

using nlohmann::json;
using namespace corrbound;

namespace {

// exit-code contract: 0 all pass, 1 inequality violated, 2 bad config,
// 3 size cap exceeded, 4 premise violated
constexpr int kExitViolated = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSizeCap = 3;
constexpr int kExitPremise = 4;

std::uint64_t env_seed() {
    if (const char* s = std::getenv("CORRBOUND_SEED")) {
        try {
            return std::stoull(s);
        } catch (...) {
            throw ConfigError("CORRBOUND_SEED is not a valid integer");
        }
    }
    return kDefaultSeed;
}

struct Output {
    std::string path;  // empty -> stdout

    void write(const std::string& text) const {
        if (path.empty()) {
            std::cout << text;
            if (!text.empty() && text.back() != '\n') std::cout << '\n';
            return;
        }
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ConfigError("cannot open output file: " + path);
        out << text;
        if (!text.empty() && text.back() != '\n') out << '\n';
    }
};

PointConfig load_config_arg(const std::string& arg) {
    // inline JSON or a path to a JSON file
    if (!arg.empty() && (arg.front() == '[' || arg.front() == '{'))
        return PointConfig::from_json_text(arg);
    return PointConfig::from_json_file(arg);
}

std::vector<int> parse_int_list(const std::string& text) {
    json j = json::parse(text);
    if (!j.is_array()) throw ConfigError("expected a JSON array of integers");
    std::vector<int> out;
    for (const auto& v : j) {
        if (!v.is_number_integer()) throw ConfigError("expected integer entries");
        out.push_back(v.get<int>());
    }
    return out;
}

std::vector<int> parse_dims(const std::string& text) {
    std::vector<int> dims;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ','))
        dims.push_back(std::stoi(tok));
    if (dims.empty()) throw ConfigError("empty --dims");
    return dims;
}

std::vector<double> make_t_grid(double tmax, int tpoints) {
    std::vector<double> grid;
    if (tpoints < 2) throw ConfigError("need at least 2 time points");
    for (int i = 0; i < tpoints; ++i) grid.push_back(tmax * i / (tpoints - 1));
    return grid;
}

json assignment_json(const Assignment& a) {
    return {{"perm", a.perm},
            {"sum", a.value_sum},
            {"max", a.value_max},
            {"multiplicity", a.max_multiplicity}};
}

std::vector<std::pair<int, int>> default_dle_pairs(int L) {
    std::vector<std::pair<int, int>> pairs;
    for (int base : {L / 8, L / 3, L / 2})
        for (int off : {1, 2, 3, 4, 6, 8, 11, 14, 18, 22, 27, 32, 38, 44, 50, 56})
            if (base + off < L) pairs.emplace_back(base, base + off);
    return pairs;
}

// Expand {"command": "...", "args": {...}, "seed": ..., "out": ..., "format": ...}
// into an argv vector; unknown top-level keys are rejected here, unknown args
// keys die in the flag parser.
std::vector<std::string> argv_from_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse failed: ") + e.what());
    }
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "command" && key != "args" && key != "seed" && key != "out" &&
            key != "format")
            throw ConfigError("unknown config key: " + key);
    }
    if (!j.contains("command") || !j["command"].is_string())
        throw ConfigError("config requires a string 'command'");
    std::vector<std::string> argv;
    std::stringstream ss(j["command"].get<std::string>());
    std::string tok;
    while (ss >> tok) argv.push_back(tok);
    if (j.contains("args"))
        for (const auto& [key, value] : j["args"].items()) {
            argv.push_back("--" + key);
            if (value.is_boolean()) {
                if (!value.get<bool>()) argv.pop_back();
            } else if (value.is_string()) {
                argv.push_back(value.get<std::string>());
            } else {
                argv.push_back(value.dump());
            }
        }
    if (j.contains("seed")) {
        argv.push_back("--seed");
        argv.push_back(std::to_string(j["seed"].get<std::uint64_t>()));
    }
    if (j.contains("out")) {
        argv.push_back("--out");
        argv.push_back(j["out"].get<std::string>());
    }
    if (j.contains("format")) {
        argv.push_back("--format");
        argv.push_back(j["format"].get<std::string>());
    }
    return argv;
}

int emit_reports(const std::vector<BoundReport>& reports, const Output& out) {
    std::string text;
    bool all_ok = true;
    int premise_bad = 0;
    for (const auto& r : reports) {
        text += r.to_json().dump() + "\n";
        all_ok = all_ok && r.satisfied;
        if (r.provenance.contains("premise_violations"))
            premise_bad += r.provenance["premise_violations"].get<int>();
        if (r.provenance.contains("entry_premise_violations"))
            premise_bad += r.provenance["entry_premise_violations"].get<int>();
    }
    out.write(text);
    if (premise_bad > 0) return kExitPremise;
    return all_ok ? 0 : kExitViolated;
}

}  // namespace

int run(std::vector<std::string> args) {
    CLI::App app{"configuration distances, correlation decay bounds, and their checkers"};
    app.require_subcommand(1);
    app.fallthrough();  // --seed/--out/--format may follow the subcommand

    std::uint64_t seed = env_seed();
    Output out;
    std::string format = "json";
    app.add_option("--seed", seed, "master seed (CORRBOUND_SEED overrides the default)");
    app.add_option("--out", out.path, "output path (default stdout)");
    app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    int exit_code = 0;

    // ------------------------------------------------------------- dist
    auto* dist_cmd = app.add_subcommand("dist", "distances between configurations");
    std::string dist_x, dist_y, dist_metric = "euclidean";
    dist_cmd->add_option("--x", dist_x, "configuration (JSON file or inline)")->required();
    dist_cmd->add_option("--y", dist_y, "second configuration");
    dist_cmd->add_option("--metric", dist_metric)->check(CLI::IsMember({"euclidean", "sup"}));
    dist_cmd->callback([&] {
        Metric metric = dist_metric == "sup" ? Metric::sup : Metric::euclidean;
        PointConfig X = load_config_arg(dist_x);
        json j;
        if (!dist_y.empty()) {
            PointConfig Y = load_config_arg(dist_y);
            CostMatrix c = CostMatrix::from_configs(X, Y, metric);
            j["hausdorff"] = hausdorff_distance(X, Y);
            j["d_m"] = bottleneck_assignment(c).value_max;
            j["d_s"] = min_sum_assignment(c).value_sum;
        } else {
            j["d_s_pairing"] = min_weight_perfect_matching(X, metric).value;
        }
        out.write(j.dump(2));
    });

    // ------------------------------------------------------------ match
    auto* match_cmd = app.add_subcommand("match", "assignment solvers");
    std::string match_x, match_y, match_metric = "euclidean", objective = "sum";
    match_cmd->add_option("--x", match_x)->required();
    match_cmd->add_option("--y", match_y)->required();
    match_cmd->add_option("--metric", match_metric)->check(CLI::IsMember({"euclidean", "sup"}));
    match_cmd->add_option("--objective", objective)
        ->check(CLI::IsMember({"sum", "bottleneck", "minimal"}));
    match_cmd->callback([&] {
        Metric metric = match_metric == "sup" ? Metric::sup : Metric::euclidean;
        CostMatrix c =
            CostMatrix::from_configs(load_config_arg(match_x), load_config_arg(match_y), metric);
        Assignment a = objective == "sum"          ? min_sum_assignment(c)
                       : objective == "bottleneck" ? bottleneck_assignment(c)
                                                   : minimal_permutation(c);
        out.write(assignment_json(a).dump(2));
    });

    // ---------------------------------------------------------- cluster
    auto* cluster_cmd = app.add_subcommand("cluster", "minimal permutation and cluster blocks");
    std::string cl_x, cl_y;
    cluster_cmd->add_option("--x", cl_x)->required();
    cluster_cmd->add_option("--y", cl_y)->required();
    cluster_cmd->callback([&] {
        PointConfig X = load_config_arg(cl_x);
        PointConfig Y = load_config_arg(cl_y);
        CostMatrix c = CostMatrix::from_configs(X, Y);
        Assignment pi0 = minimal_permutation(c);
        int j0 = select_j0(pi0, c);
        ClusterPartition cp = build_cluster(X, Y, pi0, j0);
        BlockPartition bp = block_partition(cp);
        json j;
        j["pi0"] = assignment_json(pi0);
        j["j0"] = j0;
        j["D"] = cp.D;
        j["in_cluster"] = std::vector<bool>(cp.in_cluster.begin(), cp.in_cluster.end());
        j["blocks"] = {{"RA", bp.RA}, {"RB", bp.RB}, {"RC", bp.RC}, {"RD", bp.RD}};
        out.write(j.dump(2));
    });

    // ------------------------------------------------------------ bound
    auto* bound_cmd = app.add_subcommand("bound", "explicit decay-bound checks");
    bound_cmd->require_subcommand(1);
    int b_n = 4, b_d = 2, b_points = 6, b_trials = 20;
    double b_mu = 1.0, b_C = 1.0;
    std::int64_t b_extent = 6;

    auto* thm12 = bound_cmd->add_subcommand("check-thm12", "bottleneck determinant bound");
    thm12->add_option("--n", b_n);
    thm12->add_option("--d", b_d);
    thm12->add_option("--mu", b_mu);
    thm12->add_option("--C", b_C);
    thm12->add_option("--trials", b_trials);
    thm12->add_option("--extent", b_extent);
    thm12->callback([&] {
        Rng rng(seed, 201);
        DecayKernel kernel{b_C, b_mu, nullptr};
        std::vector<BoundReport> reports;
        for (int trial = 0; trial < b_trials; ++trial) {
            PointConfig X = random_config(rng, b_n, b_d, b_extent);
            PointConfig Y = random_config(rng, b_n, b_d, b_extent);
            CMatrix m = masked_kernel_matrix(X, Y, kernel, rng);
            CostMatrix c = CostMatrix::from_configs(X, Y);
            Assignment pi0 = minimal_permutation(c);
            ClusterPartition cp = build_cluster(X, Y, pi0, select_j0(pi0, c));
            BoundReport rep;
            rep.theorem_id = "thm12";
            rep.lhs = std::abs(determinant(m));
            rep.rhs = thm12_rhs_cluster(cp, X, Y, kernel);
            rep.params = {{"n", b_n},
                          {"d", b_d},
                          {"mu", b_mu},
                          {"C", b_C},
                          {"rhs_simple", thm12_rhs_simple(X, Y, kernel)},
                          {"cluster_size", cp.cluster_size()},
                          {"X", json::parse(X.to_json_text())},
                          {"Y", json::parse(Y.to_json_text())}};
            rep.provenance = {{"seed", seed}, {"trial", trial}};
            rep.settle();
            reports.push_back(std::move(rep));
        }
        exit_code = emit_reports(reports, out);
    });

    auto* thm13 = bound_cmd->add_subcommand("check-thm13", "sum-distance permanent bound");
    thm13->add_option("--n", b_n);
    thm13->add_option("--d", b_d);
    thm13->add_option("--mu", b_mu);
    thm13->add_option("--C", b_C);
    thm13->add_option("--trials", b_trials);
    thm13->add_option("--extent", b_extent);
    thm13->callback([&] {
        Rng rng(seed, 202);
        ExplicitConstants consts = ExplicitConstants::make(b_d, b_mu);
        std::vector<BoundReport> reports;
        for (int trial = 0; trial < b_trials; ++trial) {
            PointConfig X = random_config(rng, b_n, b_d, b_extent);
            PointConfig Y = random_config(rng, b_n, b_d, b_extent);
            BoundReport rep;
            rep.theorem_id = "thm13";
            rep.lhs = abs_permanent(kernel_matrix(X, Y, b_mu, b_C));
            rep.rhs = thm13_rhs_explicit(X, Y, b_C, consts);
            rep.params = {{"n", b_n},       {"d", b_d},
                          {"mu", b_mu},     {"C", b_C},
                          {"B", consts.B},  {"D_tilde", sup_min_sum(X, Y)},
                          {"X", json::parse(X.to_json_text())},
                          {"Y", json::parse(Y.to_json_text())}};
            rep.provenance = {{"seed", seed}, {"trial", trial}};
            rep.settle();
            reports.push_back(std::move(rep));
        }
        exit_code = emit_reports(reports, out);
    });

    auto* thm15 = bound_cmd->add_subcommand("check-thm15", "pairing-sum bound");
    thm15->add_option("--points", b_points, "even configuration size 2n");
    thm15->add_option("--d", b_d);
    thm15->add_option("--mu", b_mu);
    thm15->add_option("--C", b_C);
    thm15->add_option("--trials", b_trials);
    thm15->add_option("--extent", b_extent);
    thm15->callback([&] {
        if (b_points % 2 != 0) throw ConfigError("--points must be even");
        Rng rng(seed, 203);
        ExplicitConstants consts = ExplicitConstants::make(b_d, b_mu);
        std::vector<BoundReport> reports;
        for (int trial = 0; trial < b_trials; ++trial) {
            PointConfig X = random_config(rng, b_points, b_d, b_extent);
            BoundReport rep;
            rep.theorem_id = "thm15";
            rep.lhs = pairing_sum(kernel_matrix(X, b_mu, b_C));
            rep.rhs = thm15_rhs_explicit(X, b_C, consts);
            rep.params = {{"points", b_points},
                          {"d", b_d},
                          {"mu", b_mu},
                          {"C", b_C},
                          {"D_s", min_weight_perfect_matching(X).value},
                          {"X", json::parse(X.to_json_text())}};
            rep.provenance = {{"seed", seed}, {"trial", trial}};
            rep.settle();
            reports.push_back(std::move(rep));
        }
        exit_code = emit_reports(reports, out);
    });

    auto* counting = bound_cmd->add_subcommand("counting", "permutation counting lemma table");
    counting->add_option("--n", b_n);
    counting->add_option("--d", b_d);
    counting->add_option("--trials", b_trials);
    counting->add_option("--extent", b_extent);
    counting->callback([&] {
        Rng rng(seed, 204);
        std::string csv = "config,l,count,bound\n";
        bool ok = true;
        for (int trial = 0; trial < b_trials; ++trial) {
            PointConfig X = random_config(rng, b_n, b_d, b_extent);
            PointConfig Y = random_config(rng, b_n, b_d, b_extent);
            for (const auto& [l, count] : enumerate_Ml_all(X, Y)) {
                double bound = counting_bound(l, b_n, b_d);
                ok = ok && static_cast<double>(count) <= bound * (1.0 + 1e-12);
                csv += std::to_string(trial) + "," + std::to_string(l) + "," +
                       std::to_string(count) + "," + std::to_string(bound) + "\n";
            }
        }
        out.write(csv);
        if (!ok) exit_code = kExitViolated;
    });

    // --------------------------------------------------------- anderson
    auto* anderson_cmd = app.add_subcommand("anderson", "finite-box Anderson model checks");
    anderson_cmd->require_subcommand(1);
    AndersonModel amodel;
    int a_samples = 200, a_tpoints = 41, a_draws = 100, a_stream = 0;
    double a_tmax = 20.0, a_R = 32.0, a_mu = 0.0, a_C = 0.0;
    std::string a_x, a_y;
    auto add_model_flags = [&](CLI::App* cmd) {
        cmd->add_option("--d", amodel.d);
        cmd->add_option("--L", amodel.L);
        cmd->add_option("--W", amodel.W);
    };

    auto* dle = anderson_cmd->add_subcommand("dle", "two-point localization fit");
    add_model_flags(dle);
    dle->add_option("--samples", a_samples);
    dle->add_option("--tmax", a_tmax);
    dle->add_option("--tpoints", a_tpoints);
    dle->callback([&] {
        amodel.seed = seed;
        DleFit fit = dle_fit(amodel, a_samples, default_dle_pairs(amodel.L),
                             make_t_grid(a_tmax, a_tpoints));
        if (format == "csv") {
            std::string csv = "distance,mean,envelope\n";
            for (std::size_t i = 0; i < fit.distances.size(); ++i)
                csv += std::to_string(fit.distances[i]) + "," + std::to_string(fit.means[i]) +
                       "," +
                       std::to_string(fit.C_hat * std::exp(-fit.mu_hat * fit.distances[i])) +
                       "\n";
            out.write(csv);
        } else {
            json j = {{"mu_hat", fit.mu_hat},
                      {"C_hat", fit.C_hat},
                      {"C_lsq", fit.C_lsq},
                      {"mu_ci", {fit.ci_lo, fit.ci_hi}},
                      {"localized", fit.localized},
                      {"domination_violations", fit.domination_violations},
                      {"distances", fit.distances},
                      {"means", fit.means}};
            out.write(j.dump(2));
        }
        if (!fit.localized) exit_code = kExitViolated;
    });

    auto* mpdl = anderson_cmd->add_subcommand("mpdl", "multi-point determinant bound reports");
    add_model_flags(mpdl);
    mpdl->add_option("--samples", a_samples);
    mpdl->add_option("--tmax", a_tmax);
    mpdl->add_option("--tpoints", a_tpoints);
    mpdl->add_option("--draws", a_draws, "random config draws when --x/--y absent");
    mpdl->add_option("--x", a_x, "JSON list of x sites");
    mpdl->add_option("--y", a_y, "JSON list of y sites");
    mpdl->add_option("--mu", a_mu, "fitted decay rate (0 -> run the fit)");
    mpdl->add_option("--C", a_C, "fitted constant (0 -> run the fit)");
    mpdl->callback([&] {
        amodel.seed = seed;
        std::vector<double> t_grid = make_t_grid(a_tmax, a_tpoints);
        DecayKernel kernel{a_C, a_mu, nullptr};
        if (a_mu <= 0 || a_C <= 0) {
            DleFit fit =
                dle_fit(amodel, a_samples, default_dle_pairs(amodel.L), t_grid);
            kernel.C = fit.C_hat;
            kernel.mu = fit.mu_hat;
        }
        std::vector<ConfigDraw> draws;
        if (!a_x.empty() || !a_y.empty()) {
            if (a_x.empty() || a_y.empty()) throw ConfigError("need both --x and --y");
            draws.push_back({parse_int_list(a_x), parse_int_list(a_y)});
        } else {
            Rng rng(seed, 205);
            for (int i = 0; i < a_draws; ++i) {
                int n = rng.range(2, 3);
                ConfigDraw dr;
                while (static_cast<int>(dr.x_sites.size()) < n) {
                    int s = static_cast<int>(rng.below(amodel.sites()));
                    if (std::find(dr.x_sites.begin(), dr.x_sites.end(), s) == dr.x_sites.end())
                        dr.x_sites.push_back(s);
                }
                while (static_cast<int>(dr.y_sites.size()) < n) {
                    int s = static_cast<int>(rng.below(amodel.sites()));
                    if (std::find(dr.y_sites.begin(), dr.y_sites.end(), s) == dr.y_sites.end())
                        dr.y_sites.push_back(s);
                }
                draws.push_back(std::move(dr));
            }
        }
        exit_code = emit_reports(mpdl_batch(amodel, draws, a_samples, t_grid, kernel), out);
    });

    auto* ule = anderson_cmd->add_subcommand("ule", "uniform eigenfunction envelope scan");
    add_model_flags(ule);
    ule->add_option("--stream", a_stream, "disorder stream index");
    ule->callback([&] {
        amodel.seed = seed;
        Spectrum spec = diagonalize(build_hamiltonian(amodel, a_stream));
        UleDiagnostic diag = ule_diagnostic(amodel, spec);
        json j = {{"holds", diag.holds},   {"mu", diag.mu},
                  {"C", diag.C},           {"residual", diag.residual},
                  {"centers", diag.centers}, {"mu_grid", diag.mu_grid},
                  {"c_grid", diag.c_grid}};
        out.write(j.dump(2));
        if (!diag.holds) exit_code = kExitViolated;
    });

    auto* qcmd = anderson_cmd->add_subcommand("q", "localization functional Q");
    add_model_flags(qcmd);
    qcmd->add_option("--samples", a_samples);
    qcmd->add_option("--mu", a_mu)->required();
    qcmd->add_option("--R", a_R);
    qcmd->callback([&] {
        amodel.seed = seed;
        std::vector<double> qs;
        bool pointwise_ok = true;
        for (int s = 0; s < a_samples; ++s) {
            Spectrum spec = diagonalize(build_hamiltonian(amodel, s));
            double q = q_statistic(amodel, spec, a_mu, a_R);
            qs.push_back(q);
            pointwise_ok = pointwise_ok &&
                           pointwise_bound_worst_ratio(amodel, spec, a_mu, a_R, q) <= 1.0 + 1e-12;
        }
        double mean = 0;
        for (double q : qs) mean += q;
        mean /= qs.size();
        json j = {{"q", qs}, {"mean", mean}, {"pointwise_bound_ok", pointwise_ok},
                  {"mu", a_mu}, {"R", a_R}};
        out.write(j.dump(2));
        if (!pointwise_ok) exit_code = kExitViolated;
    });

    // ------------------------------------------------------------ ising
    auto* ising_cmd = app.add_subcommand("ising", "ferromagnetic Ising model checks");
    ising_cmd->require_subcommand(1);
    std::string i_dims = "4,4", i_sites, i_method = "exact";
    double i_beta = 0.3;
    int i_sweeps = 20000, i_burnin = 2000;

    auto add_lattice_flags = [&](CLI::App* cmd) {
        cmd->add_option("--dims", i_dims, "comma-separated box sides");
        cmd->add_option("--beta", i_beta);
    };

    auto* corr = ising_cmd->add_subcommand("corr", "spin-product expectation");
    add_lattice_flags(corr);
    corr->add_option("--sites", i_sites, "JSON list of site indices")->required();
    corr->add_option("--method", i_method)
        ->check(CLI::IsMember({"exact", "metropolis", "wolff"}));
    corr->add_option("--sweeps", i_sweeps);
    corr->add_option("--burnin", i_burnin);
    corr->callback([&] {
        IsingLattice lat(parse_dims(i_dims), i_beta);
        std::vector<int> sites = parse_int_list(i_sites);
        CorrMethod method = i_method == "exact"        ? CorrMethod::exact
                            : i_method == "metropolis" ? CorrMethod::metropolis
                                                       : CorrMethod::wolff;
        CorrelationEstimate est = method == CorrMethod::exact
                                      ? exact_corr(lat, sites)
                                      : mc_corr(lat, sites, i_sweeps, i_burnin, method, seed);
        json j = {{"sites", est.sites},
                  {"mean", est.mean},
                  {"std_error", est.std_error},
                  {"method", i_method}};
        out.write(j.dump(2));
    });

    auto* decay = ising_cmd->add_subcommand("decay", "two-point decay and envelope fit");
    add_lattice_flags(decay);
    decay->callback([&] {
        IsingLattice lat(parse_dims(i_dims), i_beta);
        std::vector<std::pair<int, int>> pairs;
        for (int s = 1; s < lat.sites(); ++s) pairs.emplace_back(0, s);
        DecayFit fit = fit_decay(lat, pairs);
        if (format == "csv") {
            std::string csv = "distance,correlation,error\n";
            for (std::size_t i = 0; i < fit.distances.size(); ++i)
                csv += std::to_string(fit.distances[i]) + "," +
                       std::to_string(fit.correlations[i]) + ",0\n";
            out.write(csv);
        } else {
            json j = {{"mu_hat", fit.mu_hat},
                      {"C_hat", fit.C_hat},
                      {"ok", fit.ok},
                      {"distances", fit.distances},
                      {"correlations", fit.correlations}};
            out.write(j.dump(2));
        }
        if (!fit.ok) exit_code = kExitViolated;
    });

    auto* verify = ising_cmd->add_subcommand("verify", "multi-point bound with fitted envelope");
    add_lattice_flags(verify);
    verify->add_option("--sites", i_sites)->required();
    verify->callback([&] {
        IsingLattice lat(parse_dims(i_dims), i_beta);
        std::vector<std::pair<int, int>> pairs;
        for (int s = 1; s < lat.sites(); ++s) pairs.emplace_back(0, s);
        DecayFit fit = fit_decay(lat, pairs);
        BoundReport rep = verify_thm22(lat, parse_int_list(i_sites), fit);
        rep.provenance = {{"seed", seed}, {"dims", parse_dims(i_dims)}};
        out.write(rep.to_json().dump(2));
        if (!rep.satisfied) exit_code = kExitViolated;
    });

    auto* pf = ising_cmd->add_subcommand("pfaffian", "boundary Pfaffian identity");
    add_lattice_flags(pf);
    pf->add_option("--sites", i_sites, "cyclically ordered boundary sites")->required();
    pf->callback([&] {
        IsingLattice lat(parse_dims(i_dims), i_beta);
        PfaffianCheck check = boundary_pfaffian_check(lat, parse_int_list(i_sites));
        json j = {{"lhs", check.lhs},
                  {"pfaffian", check.pfaffian},
                  {"gap", check.gap},
                  {"cyclic_ok", check.cyclic_ok}};
        out.write(j.dump(2));
        if (!check.cyclic_ok || check.gap > 1e-10) exit_code = kExitViolated;
    });

    // --------------------------------------------------------- selftest
    auto* selftest_cmd = app.add_subcommand("selftest", "oracle and invariant suites");
    bool quick = false, full = false;
    selftest_cmd->add_flag("--quick", quick, "analytic battery only");
    selftest_cmd->add_flag("--full", full, "every oracle and inequality suite");
    selftest_cmd->callback([&] {
        std::string level = full ? "full" : "quick";
        SelftestReport report = run_selftest(level, seed);
        out.write(report.canonical_text());
        for (const auto& s : report.suites)
            std::cerr << (s.passed() ? "[ pass ] " : "[ FAIL ] ") << s.name << " (" << s.cases
                      << " cases, " << s.wall_ms << " ms)\n";
        if (!report.passed()) exit_code = kExitViolated;
    });

    // parse; map CLI11 errors to the config exit code
    std::vector<const char*> argv;
    argv.push_back("corrbound");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }
    return exit_code;
}

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    // --config expands to a synthesized command line
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) {
                std::cerr << "error: --config requires a path\n";
                return kExitConfig;
            }
            try {
                args = argv_from_config(args[i + 1]);
            } catch (const ConfigError& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitConfig;
            }
            break;
        }
    }
    try {
        return run(std::move(args));
    } catch (const SizeCapError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSizeCap;
    } catch (const PremiseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPremise;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const nlohmann::json::parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
