#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "corrbound/bounds.hpp"
#include "corrbound/geometry.hpp"
#include "corrbound/report.hpp"
#include "corrbound/rng.hpp"

namespace corrbound {

// Nearest-neighbor ferromagnetic lattice (J = 1, h = 0, open boundaries).
class IsingLattice {
public:
    IsingLattice(std::vector<int> dims, double beta);

    int dim() const { return static_cast<int>(dims_.size()); }
    const std::vector<int>& dims() const { return dims_; }
    int sites() const { return sites_; }
    double beta() const { return beta_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    std::vector<std::int64_t> site_coords(int site) const;
    int site_index(const std::vector<std::int64_t>& coords) const;
    PointConfig sites_config(const std::vector<int>& sites) const;

private:
    std::vector<int> dims_;
    int sites_;
    double beta_;
    std::vector<std::pair<int, int>> edges_;
};

enum class CorrMethod { exact, metropolis, wolff };

struct CorrelationEstimate {
    std::vector<int> sites;
    double mean = 0;
    double std_error = 0;
    CorrMethod method = CorrMethod::exact;
};

// Exact Gibbs expectations of spin products by full state enumeration
// (<= 20 sites). Evaluates many observables in a single sweep; the state
// space is split into fixed blocks reduced in order, so results do not
// depend on the number of threads.
std::vector<double> exact_corr_many(const IsingLattice& lat,
                                    const std::vector<std::vector<int>>& observables);
CorrelationEstimate exact_corr(const IsingLattice& lat, const std::vector<int>& A);

// Monte Carlo estimate with batch-means errors; independent chains run on
// separate RNG streams and are combined in chain order.
CorrelationEstimate mc_corr(const IsingLattice& lat, const std::vector<int>& A,
                            int sweeps, int burn_in, CorrMethod method,
                            std::uint64_t seed = kDefaultSeed, int chains = 4);

double truncated_two_point(const IsingLattice& lat, int x, int y);

struct DecayFit {
    double mu_hat = 0;  // envelope rate: corr(r) <= C_hat * exp(-mu_hat r)
    double C_hat = 1.0;
    bool ok = false;                       // false when data do not decay
    std::vector<double> distances;
    std::vector<double> correlations;
};

// Envelope fit with C = 1: the largest mu such that every measured
// two-point lies below exp(-mu r). All-zero data fit any mu (mu = inf).
DecayFit fit_decay(const IsingLattice& lat, const std::vector<std::pair<int, int>>& pairs);

// Truncated four-point function from exact two- and four-point values.
double u4(const IsingLattice& lat, int x1, int x2, int x3, int x4);

// Pairing (Wick) sum of two-point functions: hafnian of the two-point matrix.
double g2n(const IsingLattice& lat, const std::vector<int>& sites);

// Tree-diagram ceiling for |U_4|: 2 sum_y prod_i <sigma_{x_i} sigma_y>.
double u4_tree_bound(const IsingLattice& lat, int x1, int x2, int x3, int x4);

// Wick error estimate: |<sigma_A> - G_2n| vs sum over 4-subsets of
// |U_4| G_{2n-4}; both sides exact.
struct WickErrorCheck {
    double gap = 0;    // |<sigma_A> - G_2n|
    double bound = 0;  // assembled RHS
};
WickErrorCheck wick_error_check(const IsingLattice& lat, const std::vector<int>& sites);

// <sigma_A> against the explicit pairing bound with a fitted envelope.
BoundReport verify_thm22(const IsingLattice& lat, const std::vector<int>& sites,
                         const DecayFit& fit);

struct PfaffianCheck {
    double lhs = 0;       // exact <prod sigma>
    double pfaffian = 0;  // Pf of the two-point skew extension
    double gap = 0;
    bool cyclic_ok = false;
};

// Boundary Pfaffian identity on a 2D open rectangle: sites must lie on the
// outer face; a non-cyclic order is reported, not rejected.
PfaffianCheck boundary_pfaffian_check(const IsingLattice& lat, const std::vector<int>& sites);

// Position of each boundary site along the canonical perimeter walk.
bool is_cyclic_boundary_order(const IsingLattice& lat, const std::vector<int>& sites);

namespace reference {
// Serial twin of the block-parallel enumeration, kept for testing.
std::vector<double> exact_corr_many_serial(const IsingLattice& lat,
                                           const std::vector<std::vector<int>>& observables);
}  // namespace reference

}  // namespace corrbound
