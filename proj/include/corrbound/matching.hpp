#pragma once
#include <cstdint>
#include <utility>
#include <vector>

#include "corrbound/geometry.hpp"

namespace corrbound {

// Square nonnegative cost matrix. When built from lattice configurations it
// also carries exact integer comparison keys (squared Euclidean or sup
// distances), so value equality tests never rely on floating point.
class CostMatrix {
public:
    static CostMatrix from_configs(const PointConfig& X, const PointConfig& Y,
                                   Metric m = Metric::euclidean);
    static CostMatrix from_values(int n, std::vector<double> values);

    int size() const { return n_; }
    double cost(int j, int k) const { return cost_[static_cast<std::size_t>(j) * n_ + k]; }
    bool has_keys() const { return !key_.empty(); }
    std::int64_t key(int j, int k) const { return key_[static_cast<std::size_t>(j) * n_ + k]; }

    // rank of entry (j,k) among the sorted distinct values; exact comparisons
    int rank(int j, int k) const { return rank_[static_cast<std::size_t>(j) * n_ + k]; }
    int rank_count() const { return rank_count_; }
    double cost_at_rank(int r) const { return rank_cost_[r]; }
    std::int64_t key_at_rank(int r) const { return rank_key_[r]; }

private:
    void build_ranks();
    int n_ = 0;
    std::vector<double> cost_;
    std::vector<std::int64_t> key_;
    std::vector<int> rank_;
    std::vector<double> rank_cost_;
    std::vector<std::int64_t> rank_key_;
    int rank_count_ = 0;
};

struct Assignment {
    std::vector<int> perm;       // perm[j] = assigned column of row j
    double value_sum = 0;        // sum of chosen costs
    double value_max = 0;        // bottleneck (max chosen cost)
    int max_multiplicity = 0;    // #rows attaining value_max
    std::int64_t value_max_key = -1;  // exact key of the bottleneck, -1 if generic

    void finalize(const CostMatrix& c);  // recompute values from perm
};

// Exact min-sum assignment (Hungarian, O(n^3)); deterministic tie-breaking.
Assignment min_sum_assignment(const CostMatrix& c);

// Exact bottleneck assignment: binary search on the sorted distinct costs
// with bipartite matching feasibility tests.
Assignment bottleneck_assignment(const CostMatrix& c);

// Bottleneck-optimal assignment that additionally attains the bottleneck
// value the fewest times, via a 0/1-surrogate min-sum reduction.
Assignment minimal_permutation(const CostMatrix& c);

// Smallest row index attaining the bottleneck value.
int select_j0(const Assignment& a, const CostMatrix& c);

struct Pairing {
    std::vector<std::pair<int, int>> pairs;
    double value = 0;
};

// Exact D_s(X): min total length over perfect pairings, |X| = 2n <= 22,
// bitmask DP pairing the lowest unset index.
Pairing min_weight_perfect_matching(const PointConfig& X, Metric m = Metric::euclidean);

}  // namespace corrbound
