#include "corrbound/matching.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>

#include "corrbound/errors.hpp"

namespace corrbound {

CostMatrix CostMatrix::from_configs(const PointConfig& X, const PointConfig& Y, Metric m) {
    if (X.dim() != Y.dim()) throw std::invalid_argument("CostMatrix: dimension mismatch");
    if (X.size() != Y.size()) throw std::invalid_argument("CostMatrix: size mismatch");
    CostMatrix c;
    c.n_ = X.size();
    c.cost_.resize(static_cast<std::size_t>(c.n_) * c.n_);
    c.key_.resize(c.cost_.size());
    for (int j = 0; j < c.n_; ++j)
        for (int k = 0; k < c.n_; ++k) {
            std::size_t idx = static_cast<std::size_t>(j) * c.n_ + k;
            if (m == Metric::sup) {
                c.key_[idx] = sup_dist(X[j], Y[k]);
                c.cost_[idx] = static_cast<double>(c.key_[idx]);
            } else {
                c.key_[idx] = dist_sq(X[j], Y[k]);
                c.cost_[idx] = std::sqrt(static_cast<double>(c.key_[idx]));
            }
        }
    c.build_ranks();
    return c;
}

CostMatrix CostMatrix::from_values(int n, std::vector<double> values) {
    if (static_cast<int>(values.size()) != n * n)
        throw std::invalid_argument("CostMatrix: values must be n*n");
    for (double v : values)
        if (!(v >= 0) || !std::isfinite(v))
            throw std::invalid_argument("CostMatrix: entries must be finite and >= 0");
    CostMatrix c;
    c.n_ = n;
    c.cost_ = std::move(values);
    c.build_ranks();
    return c;
}

void CostMatrix::build_ranks() {
    rank_.resize(cost_.size());
    if (has_keys()) {
        std::vector<std::int64_t> vals(key_);
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        rank_count_ = static_cast<int>(vals.size());
        rank_key_ = vals;
        rank_cost_.resize(vals.size());
        std::map<std::int64_t, int> pos;
        for (int r = 0; r < rank_count_; ++r) pos[vals[r]] = r;
        for (std::size_t i = 0; i < key_.size(); ++i) {
            rank_[i] = pos[key_[i]];
            rank_cost_[rank_[i]] = cost_[i];
        }
    } else {
        std::vector<double> vals(cost_);
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        rank_count_ = static_cast<int>(vals.size());
        rank_cost_ = vals;
        rank_key_.assign(vals.size(), -1);
        std::map<double, int> pos;
        for (int r = 0; r < rank_count_; ++r) pos[vals[r]] = r;
        for (std::size_t i = 0; i < cost_.size(); ++i) rank_[i] = pos[cost_[i]];
    }
}

void Assignment::finalize(const CostMatrix& c) {
    int n = c.size();
    value_sum = 0;
    int best_rank = -1;
    for (int j = 0; j < n; ++j) {
        value_sum += c.cost(j, perm[j]);
        best_rank = std::max(best_rank, c.rank(j, perm[j]));
    }
    value_max = n ? c.cost_at_rank(best_rank) : 0.0;
    value_max_key = n ? c.key_at_rank(best_rank) : -1;
    max_multiplicity = 0;
    for (int j = 0; j < n; ++j)
        if (c.rank(j, perm[j]) == best_rank) ++max_multiplicity;
}

namespace {

// JV-style shortest augmenting path Hungarian; ties resolved by scanning
// columns in index order, so results are reproducible.
std::vector<int> hungarian(int n, const std::vector<double>& cost) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            int i0 = p[j0], j1 = 0;
            double delta = inf;
            for (int j = 1; j <= n; ++j)
                if (!used[j]) {
                    double cur = cost[static_cast<std::size_t>(i0 - 1) * n + (j - 1)] -
                                 u[i0] - v[j];
                    if (cur < minv[j]) { minv[j] = cur; way[j] = j0; }
                    if (minv[j] < delta) { delta = minv[j]; j1 = j; }
                }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) { u[p[j]] += delta; v[j] -= delta; }
                else minv[j] -= delta;
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> perm(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j]) perm[p[j] - 1] = j - 1;
    return perm;
}

// Kuhn's augmenting path: perfect matching using only edges of rank <= cap?
bool feasible(const CostMatrix& c, int rank_cap, std::vector<int>* out_perm = nullptr) {
    int n = c.size();
    std::vector<int> match_col(n, -1);  // col -> row
    std::vector<char> visited(n);
    std::function<bool(int)> try_row = [&](int row) {
        for (int col = 0; col < n; ++col) {
            if (c.rank(row, col) > rank_cap || visited[col]) continue;
            visited[col] = 1;
            if (match_col[col] < 0 || try_row(match_col[col])) {
                match_col[col] = row;
                return true;
            }
        }
        return false;
    };
    for (int row = 0; row < n; ++row) {
        std::fill(visited.begin(), visited.end(), 0);
        if (!try_row(row)) return false;
    }
    if (out_perm) {
        out_perm->assign(n, -1);
        for (int col = 0; col < n; ++col) (*out_perm)[match_col[col]] = col;
    }
    return true;
}

}  // namespace

Assignment min_sum_assignment(const CostMatrix& c) {
    int n = c.size();
    std::vector<double> cost(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) cost[static_cast<std::size_t>(j) * n + k] = c.cost(j, k);
    Assignment a;
    a.perm = hungarian(n, cost);
    a.finalize(c);
    return a;
}

Assignment bottleneck_assignment(const CostMatrix& c) {
    int n = c.size();
    Assignment a;
    if (n == 0) return a;
    int lo = 0, hi = c.rank_count() - 1;
    while (lo < hi) {
        int mid = (lo + hi) / 2;
        if (feasible(c, mid)) hi = mid;
        else lo = mid + 1;
    }
    feasible(c, lo, &a.perm);
    a.finalize(c);
    return a;
}

Assignment minimal_permutation(const CostMatrix& c) {
    int n = c.size();
    Assignment a;
    if (n == 0) return a;
    Assignment bottleneck = bottleneck_assignment(c);
    int rank_d = 0;  // rank of the bottleneck value D
    for (int j = 0; j < n; ++j)
        rank_d = std::max(rank_d, c.rank(j, bottleneck.perm[j]));
    // surrogate: 0 below D, 1 at D, forbidden above; min-sum minimizes the
    // number of bottleneck-valued edges among bottleneck-feasible assignments
    const double big = static_cast<double>(n) + 1.0;
    std::vector<double> surrogate(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            int r = c.rank(j, k);
            surrogate[static_cast<std::size_t>(j) * n + k] =
                r < rank_d ? 0.0 : (r == rank_d ? 1.0 : big);
        }
    a.perm = hungarian(n, surrogate);
    double s = 0;
    for (int j = 0; j < n; ++j) s += surrogate[static_cast<std::size_t>(j) * n + a.perm[j]];
    if (s >= big)
        throw std::logic_error("minimal_permutation: surrogate infeasible (internal error)");
    a.finalize(c);
    if (a.max_multiplicity != static_cast<int>(std::llround(s)))
        throw std::logic_error("minimal_permutation: multiplicity mismatch (internal error)");
    return a;
}

int select_j0(const Assignment& a, const CostMatrix& c) {
    int n = c.size();
    int best_rank = -1;
    for (int j = 0; j < n; ++j) best_rank = std::max(best_rank, c.rank(j, a.perm[j]));
    for (int j = 0; j < n; ++j)
        if (c.rank(j, a.perm[j]) == best_rank) return j;
    throw std::logic_error("select_j0: empty assignment");
}

Pairing min_weight_perfect_matching(const PointConfig& X, Metric m) {
    int sz = X.size();
    if (sz % 2 != 0) throw std::invalid_argument("min_weight_perfect_matching: odd cardinality");
    if (sz > 22) throw SizeCapError("min_weight_perfect_matching: 2n exceeds cap 22");
    Pairing out;
    if (sz == 0) return out;

    std::vector<double> w(static_cast<std::size_t>(sz) * sz);
    for (int i = 0; i < sz; ++i)
        for (int j = 0; j < sz; ++j) w[static_cast<std::size_t>(i) * sz + j] = dist(X[i], X[j], m);

    std::uint32_t full = (1u << sz) - 1;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dp(full + 1, inf);
    std::vector<std::pair<std::uint8_t, std::uint8_t>> choice(full + 1);
    dp[0] = 0.0;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
        if (std::popcount(mask) % 2 != 0) continue;
        int i = std::countr_zero(mask);
        std::uint32_t rest = mask & ~(1u << i);
        std::uint32_t probe = rest;
        while (probe) {
            int j = std::countr_zero(probe);
            probe &= probe - 1;
            double cand = dp[rest & ~(1u << j)] + w[static_cast<std::size_t>(i) * sz + j];
            if (cand < dp[mask]) {
                dp[mask] = cand;
                choice[mask] = {static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j)};
            }
        }
    }
    out.value = dp[full];
    std::uint32_t mask = full;
    while (mask) {
        auto [i, j] = choice[mask];
        out.pairs.emplace_back(i, j);
        mask &= ~(1u << i);
        mask &= ~(1u << j);
    }
    return out;
}

}  // namespace corrbound
