#pragma once
#include <functional>
#include <utility>
#include <vector>

#include "corrbound/geometry.hpp"
#include "corrbound/matching.hpp"
#include "corrbound/multilinear.hpp"
#include "corrbound/report.hpp"

namespace corrbound {

// Two-point decay hypothesis: entries bounded by C * exp(-mu * K(r)).
struct DecayKernel {
    double C = 1.0;
    double mu = 1.0;
    std::function<double(double)> K;  // nondecreasing profile, identity if unset

    double profile(double r) const { return K ? K(r) : r; }
    double entry_bound(double r) const;
    double squared_term(double r) const;  // exp(-2 mu K(r))
    void validate() const;
};

// Cluster of pairs reachable from the bottleneck pair j0 through
// sub-bottleneck cross-distances, plus the induced block structure.
struct ClusterPartition {
    Assignment pi0;
    int j0 = -1;
    double D = 0;                  // bottleneck value
    std::int64_t D_key = -1;       // exact key (squared distance)
    std::vector<char> in_cluster;  // over pair indices; in_cluster[j0] == 0

    std::vector<int> cluster_indices() const;
    int cluster_size() const;
};

struct BlockPartition {
    // permuted order: rows {j0, cluster...} then the rest; columns pi0(cluster)
    // then pi0(rest). The top-left block A is (m+1) x m with m = |cluster|.
    std::vector<int> row_order;
    std::vector<int> col_order;
    int top_rows = 0;   // m + 1
    int left_cols = 0;  // m
    // explicit (row j, column pi0(k)) products
    std::vector<std::pair<int, int>> RA, RB, RC, RD;
};

// BFS over the edge relation a -> b iff |x_a - y_{pi0(b)}| < D, from j0.
// Reaching j0 itself would contradict minimality of pi0 and throws.
ClusterPartition build_cluster(const PointConfig& X, const PointConfig& Y,
                               const Assignment& pi0, int j0);

BlockPartition block_partition(const ClusterPartition& cp);

// Permute m into the block arrangement of bp.
CMatrix permute_to_blocks(const CMatrix& m, const BlockPartition& bp);

// Spectral norm of the B block of a contraction with a tall-thin top-left
// block; guarantees |det M| <= returned value.
double bordered_det_bound(const CMatrix& m, int ell, int cols_m, double norm_tol = 1e-9);

// sqrt-sum bound over all cross pairs at distance >= D_m.
double thm12_rhs_simple(const PointConfig& X, const PointConfig& Y, const DecayKernel& k);

// Frobenius bound of the B block: the stronger cluster estimate.
double thm12_rhs_cluster(const ClusterPartition& cp, const PointConfig& X,
                         const PointConfig& Y, const DecayKernel& k);

using MatrixFamilySampler = std::function<CMatrix(int sample, double t)>;

// Empirical check of the disordered determinant bound: LHS is the mean over
// samples of the max over t_grid of |det|, RHS the two evaluators above.
BoundReport verify_thm12(const MatrixFamilySampler& sampler, const PointConfig& X,
                         const PointConfig& Y, const DecayKernel& k, int samples,
                         const std::vector<double>& t_grid);

// Deterministic harness matrix: signed decay-kernel entries scaled by
// 1/max(1, ||M||) so both premises hold with the kernel's own C.
CMatrix masked_kernel_matrix(const PointConfig& X, const PointConfig& Y,
                             const DecayKernel& k, Rng& rng);

}  // namespace corrbound
