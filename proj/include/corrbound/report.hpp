#pragma once
#include <string>

#include <json.hpp>

namespace corrbound {

// Outcome of one inequality check: LHS vs RHS with full provenance, so a
// report stream can be re-audited without rerunning.
struct BoundReport {
    std::string theorem_id;
    double lhs = 0;
    double rhs = 0;
    bool satisfied = false;
    nlohmann::json params = nlohmann::json::object();
    nlohmann::json provenance = nlohmann::json::object();

    static constexpr double kRelSlack = 1e-12;

    void settle() { satisfied = lhs <= rhs * (1.0 + kRelSlack); }

    nlohmann::json to_json() const {
        return {{"theorem", theorem_id}, {"lhs", lhs},    {"rhs", rhs},
                {"satisfied", satisfied}, {"params", params}, {"provenance", provenance}};
    }
};

}  // namespace corrbound
