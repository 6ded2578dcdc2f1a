#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "corrbound/rng.hpp"

namespace corrbound {

struct SuiteResult {
    std::string name;
    int cases = 0;
    std::vector<std::string> failures;  // inputs, expected, got
    nlohmann::json info = nlohmann::json::object();
    double wall_ms = 0;  // kept out of the canonical report for determinism

    bool passed() const { return failures.empty(); }
    nlohmann::json to_json() const {
        return {{"suite", name}, {"cases", cases}, {"failures", failures}, {"info", info}};
    }
};

struct SelftestReport {
    std::string level;
    std::uint64_t seed = kDefaultSeed;
    std::vector<SuiteResult> suites;

    bool passed() const;
    nlohmann::json to_json() const;
    std::string canonical_text() const;  // deterministic byte-for-byte serialization
};

// Oracle/invariant suites. Names double as acceptance-criterion ids.
SuiteResult suite_distance_oracles(std::uint64_t seed);      // AC1
SuiteResult suite_minimal_permutation(std::uint64_t seed);   // AC2
SuiteResult suite_cluster_separation(std::uint64_t seed);    // AC3
SuiteResult suite_bordered_determinant(std::uint64_t seed);  // AC4
SuiteResult suite_thm12_deterministic(std::uint64_t seed);   // AC5
SuiteResult suite_thm13_explicit(std::uint64_t seed);        // AC6
SuiteResult suite_counting_lemma(std::uint64_t seed);        // AC7
SuiteResult suite_thm15_pairing(std::uint64_t seed);         // AC8
SuiteResult suite_ising_exact(std::uint64_t seed);           // AC9
SuiteResult suite_anderson(std::uint64_t seed);              // AC10
SuiteResult suite_quick_analytic(std::uint64_t seed);        // trivial-value battery

// level: "quick" (analytic battery) or "full" (every suite above).
SelftestReport run_selftest(const std::string& level, std::uint64_t seed);

}  // namespace corrbound
