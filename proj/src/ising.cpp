#include "corrbound/ising.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

#include "corrbound/errors.hpp"
#include "corrbound/matching.hpp"
#include "corrbound/multilinear.hpp"

namespace corrbound {

namespace {
constexpr int kExactCap = 20;
}

IsingLattice::IsingLattice(std::vector<int> dims, double beta)
    : dims_(std::move(dims)), beta_(beta) {
    if (dims_.empty()) throw std::invalid_argument("IsingLattice: empty dims");
    if (!(beta_ >= 0)) throw std::invalid_argument("IsingLattice: beta must be >= 0");
    sites_ = 1;
    for (int d : dims_) {
        if (d < 1) throw std::invalid_argument("IsingLattice: dims must be >= 1");
        sites_ *= d;
    }
    for (int s = 0; s < sites_; ++s) {
        auto c = site_coords(s);
        for (int axis = 0; axis < dim(); ++axis) {
            if (c[axis] + 1 < dims_[axis]) {
                auto nb = c;
                ++nb[axis];
                edges_.emplace_back(s, site_index(nb));
            }
        }
    }
}

std::vector<std::int64_t> IsingLattice::site_coords(int site) const {
    std::vector<std::int64_t> c(dim());
    for (int axis = dim() - 1; axis >= 0; --axis) {
        c[axis] = site % dims_[axis];
        site /= dims_[axis];
    }
    return c;
}

int IsingLattice::site_index(const std::vector<std::int64_t>& coords) const {
    int s = 0;
    for (int axis = 0; axis < dim(); ++axis) {
        if (coords[axis] < 0 || coords[axis] >= dims_[axis])
            throw std::invalid_argument("IsingLattice: coordinate out of range");
        s = s * dims_[axis] + static_cast<int>(coords[axis]);
    }
    return s;
}

PointConfig IsingLattice::sites_config(const std::vector<int>& sites) const {
    std::vector<Point> pts;
    for (int s : sites) pts.push_back(Point{site_coords(s)});
    return PointConfig(dim(), std::move(pts));
}

namespace {

// spin of site i in state word s: bit set -> +1
inline int spin(std::uint32_t s, int i) { return (s >> i) & 1u ? 1 : -1; }

std::uint32_t observable_mask(const IsingLattice& lat, const std::vector<int>& sites) {
    std::uint32_t m = 0;
    for (int s : sites) {
        if (s < 0 || s >= lat.sites()) throw std::invalid_argument("observable site out of range");
        m ^= (1u << s);  // sigma^2 = 1, repeated sites cancel
    }
    return m;
}

struct EnumSetup {
    std::vector<std::uint32_t> masks;
    std::vector<double> weight_table;  // exp(-beta E), E indexed by edge sum
    int n_edges;
};

EnumSetup enum_setup(const IsingLattice& lat, const std::vector<std::vector<int>>& observables) {
    if (lat.sites() > kExactCap)
        throw SizeCapError("exact enumeration capped at 20 sites");
    EnumSetup setup;
    setup.n_edges = static_cast<int>(lat.edges().size());
    for (const auto& A : observables) setup.masks.push_back(observable_mask(lat, A));
    setup.weight_table.resize(2 * setup.n_edges + 1);
    for (int agree = -setup.n_edges; agree <= setup.n_edges; ++agree) {
        // H = -sum_edges sigma sigma = -agree
        setup.weight_table[agree + setup.n_edges] = std::exp(lat.beta() * agree);
    }
    return setup;
}

// accumulate Z and the signed weights of every observable over [lo, hi)
void enum_range(const IsingLattice& lat, const EnumSetup& setup, std::uint32_t lo,
                std::uint32_t hi, double& z_out, std::vector<double>& num_out) {
    const auto& edges = lat.edges();
    double z = 0;
    std::vector<double> num(setup.masks.size(), 0.0);
    for (std::uint32_t s = lo; s < hi; ++s) {
        int agree = 0;
        for (const auto& [a, b] : edges) agree += spin(s, a) * spin(s, b);
        double w = setup.weight_table[agree + setup.n_edges];
        z += w;
        for (std::size_t k = 0; k < setup.masks.size(); ++k) {
            // product over A of sigma = (-1)^{#down spins inside A}
            int down = std::popcount(setup.masks[k] & ~s);
            num[k] += (down & 1) ? -w : w;
        }
    }
    z_out = z;
    num_out = std::move(num);
}

}  // namespace

std::vector<double> exact_corr_many(const IsingLattice& lat,
                                    const std::vector<std::vector<int>>& observables) {
    EnumSetup setup = enum_setup(lat, observables);
    std::uint64_t states = 1ull << lat.sites();

    // fixed block split; per-block partials combined in block order, so the
    // result is independent of thread count
    int nblocks = static_cast<int>(std::min<std::uint64_t>(states, 256));
    std::vector<double> z_block(nblocks, 0.0);
    std::vector<std::vector<double>> num_block(nblocks);

#pragma omp parallel for schedule(static)
    for (int b = 0; b < nblocks; ++b) {
        std::uint64_t lo = states * b / nblocks;
        std::uint64_t hi = states * (b + 1) / nblocks;
        enum_range(lat, setup, static_cast<std::uint32_t>(lo), static_cast<std::uint32_t>(hi),
                   z_block[b], num_block[b]);
    }

    double z = 0;
    std::vector<double> num(observables.size(), 0.0);
    for (int b = 0; b < nblocks; ++b) {
        z += z_block[b];
        for (std::size_t k = 0; k < num.size(); ++k) num[k] += num_block[b][k];
    }
    for (auto& v : num) v /= z;
    return num;
}

namespace reference {

std::vector<double> exact_corr_many_serial(const IsingLattice& lat,
                                           const std::vector<std::vector<int>>& observables) {
    EnumSetup setup = enum_setup(lat, observables);
    std::uint64_t states = 1ull << lat.sites();
    double z = 0;
    std::vector<double> num;
    enum_range(lat, setup, 0, static_cast<std::uint32_t>(states), z, num);
    for (auto& v : num) v /= z;
    return num;
}

}  // namespace reference

CorrelationEstimate exact_corr(const IsingLattice& lat, const std::vector<int>& A) {
    CorrelationEstimate est;
    est.sites = A;
    est.mean = exact_corr_many(lat, {A})[0];
    est.std_error = 0;
    est.method = CorrMethod::exact;
    return est;
}

namespace {

struct Chain {
    std::vector<int> spins;
    Rng rng;
    const IsingLattice* lat;
    std::vector<std::vector<int>> nbrs;

    Chain(const IsingLattice& l, Rng r) : rng(r), lat(&l) {
        spins.resize(l.sites());
        nbrs.resize(l.sites());
        for (auto& s : spins) s = rng.uniform() < 0.5 ? 1 : -1;
        for (const auto& [a, b] : l.edges()) {
            nbrs[a].push_back(b);
            nbrs[b].push_back(a);
        }
    }

    void metropolis_sweep() {
        for (int i = 0; i < lat->sites(); ++i) {
            int field = 0;
            for (int j : nbrs[i]) field += spins[j];
            double dE = 2.0 * spins[i] * field;
            if (dE <= 0 || rng.uniform() < std::exp(-lat->beta() * dE)) spins[i] = -spins[i];
        }
    }

    void wolff_step() {
        double p_add = 1.0 - std::exp(-2.0 * lat->beta());
        int seed_site = static_cast<int>(rng.below(lat->sites()));
        int cluster_spin = spins[seed_site];
        std::vector<int> stack{seed_site};
        std::vector<char> in(lat->sites(), 0);
        in[seed_site] = 1;
        spins[seed_site] = -cluster_spin;
        while (!stack.empty()) {
            int s = stack.back();
            stack.pop_back();
            for (int j : nbrs[s]) {
                if (!in[j] && spins[j] == cluster_spin && rng.uniform() < p_add) {
                    in[j] = 1;
                    spins[j] = -cluster_spin;
                    stack.push_back(j);
                }
            }
        }
    }

    double measure(const std::vector<int>& A) const {
        int p = 1;
        for (int s : A) p *= spins[s];
        return p;
    }
};

}  // namespace

CorrelationEstimate mc_corr(const IsingLattice& lat, const std::vector<int>& A, int sweeps,
                            int burn_in, CorrMethod method, std::uint64_t seed, int chains) {
    if (method == CorrMethod::exact) return exact_corr(lat, A);
    if (sweeps <= burn_in) throw std::invalid_argument("mc_corr: sweeps must exceed burn_in");
    for (int s : A)
        if (s < 0 || s >= lat.sites()) throw std::invalid_argument("mc_corr: site out of range");

    int measured = sweeps - burn_in;
    std::vector<std::vector<double>> samples(chains);

#pragma omp parallel for schedule(static)
    for (int c = 0; c < chains; ++c) {
        Chain chain(lat, Rng(seed, 7000 + c));
        samples[c].reserve(measured);
        for (int s = 0; s < sweeps; ++s) {
            if (method == CorrMethod::metropolis) chain.metropolis_sweep();
            else chain.wolff_step();
            if (s >= burn_in) samples[c].push_back(chain.measure(A));
        }
    }

    // batch means over the chain-ordered concatenation
    std::vector<double> all;
    all.reserve(static_cast<std::size_t>(chains) * measured);
    for (int c = 0; c < chains; ++c) all.insert(all.end(), samples[c].begin(), samples[c].end());

    if (all.size() < 2) {
        CorrelationEstimate est;
        est.sites = A;
        est.mean = all.empty() ? 0.0 : all[0];
        est.method = method;
        return est;
    }
    int nbatch = std::min<int>(32, static_cast<int>(all.size()));
    std::vector<double> batch(nbatch, 0.0);
    std::size_t per = all.size() / nbatch;
    double mean = 0;
    for (int b = 0; b < nbatch; ++b) {
        double s = 0;
        for (std::size_t i = b * per; i < (b + 1) * per; ++i) s += all[i];
        batch[b] = s / per;
        mean += batch[b];
    }
    mean /= nbatch;
    double var = 0;
    for (double b : batch) var += (b - mean) * (b - mean);
    var /= (nbatch - 1);

    CorrelationEstimate est;
    est.sites = A;
    est.mean = mean;
    est.std_error = std::sqrt(var / nbatch);
    est.method = method;
    return est;
}

double truncated_two_point(const IsingLattice& lat, int x, int y) {
    auto vals = exact_corr_many(lat, {{x, y}, {x}, {y}});
    return vals[0] - vals[1] * vals[2];
}

DecayFit fit_decay(const IsingLattice& lat, const std::vector<std::pair<int, int>>& pairs) {
    if (pairs.empty()) throw std::invalid_argument("fit_decay: no pairs");
    std::vector<std::vector<int>> obs;
    for (auto [x, y] : pairs) obs.push_back({x, y});
    std::vector<double> corr = exact_corr_many(lat, obs);

    DecayFit fit;
    double mu = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto cx = lat.site_coords(pairs[i].first);
        auto cy = lat.site_coords(pairs[i].second);
        double r = dist(Point{cx}, Point{cy});
        if (r == 0) continue;
        fit.distances.push_back(r);
        fit.correlations.push_back(corr[i]);
        if (corr[i] > 0) mu = std::min(mu, -std::log(corr[i]) / r);
    }
    fit.mu_hat = mu;
    fit.C_hat = 1.0;
    fit.ok = mu > 0;
    return fit;
}

double u4(const IsingLattice& lat, int x1, int x2, int x3, int x4) {
    auto v = exact_corr_many(lat, {{x1, x2, x3, x4}, {x1, x2}, {x3, x4},
                                    {x1, x3}, {x2, x4}, {x1, x4}, {x2, x3}});
    return v[0] - (v[1] * v[2] + v[3] * v[4] + v[5] * v[6]);
}

double u4_tree_bound(const IsingLattice& lat, int x1, int x2, int x3, int x4) {
    std::vector<std::vector<int>> obs;
    for (int y = 0; y < lat.sites(); ++y) {
        obs.push_back({x1, y});
        obs.push_back({x2, y});
        obs.push_back({x3, y});
        obs.push_back({x4, y});
    }
    std::vector<double> v = exact_corr_many(lat, obs);
    double total = 0;
    for (int y = 0; y < lat.sites(); ++y) {
        double p = 1;
        for (int k = 0; k < 4; ++k) p *= v[4 * y + k];
        total += p;
    }
    return 2.0 * total;
}

namespace {

RMatrix two_point_matrix(const IsingLattice& lat, const std::vector<int>& sites) {
    int n = static_cast<int>(sites.size());
    std::vector<std::vector<int>> obs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) obs.push_back({sites[i], sites[j]});
    std::vector<double> v = exact_corr_many(lat, obs);
    RMatrix m(n, n, 0.0);
    int idx = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            m(i, j) = v[idx];
            m(j, i) = v[idx];
            ++idx;
        }
    return m;
}

}  // namespace

double g2n(const IsingLattice& lat, const std::vector<int>& sites) {
    if (sites.size() % 2 != 0) throw std::invalid_argument("g2n: need an even site count");
    return hafnian(two_point_matrix(lat, sites));
}

WickErrorCheck wick_error_check(const IsingLattice& lat, const std::vector<int>& sites) {
    int n2 = static_cast<int>(sites.size());
    if (n2 % 2 != 0 || n2 < 4) throw std::invalid_argument("wick_error_check: need even >= 4");
    WickErrorCheck out;
    double full = exact_corr(lat, sites).mean;
    out.gap = std::abs(full - g2n(lat, sites));
    // sum over 4-subsets of |U4| * G_{2n-4}(rest)
    for (int a = 0; a < n2; ++a)
        for (int b = a + 1; b < n2; ++b)
            for (int c = b + 1; c < n2; ++c)
                for (int d = c + 1; d < n2; ++d) {
                    std::vector<int> rest;
                    for (int i = 0; i < n2; ++i)
                        if (i != a && i != b && i != c && i != d) rest.push_back(sites[i]);
                    double u = std::abs(u4(lat, sites[a], sites[b], sites[c], sites[d]));
                    double g = rest.empty() ? 1.0 : g2n(lat, rest);
                    out.bound += u * g;
                }
    return out;
}

BoundReport verify_thm22(const IsingLattice& lat, const std::vector<int>& sites,
                         const DecayFit& fit) {
    BoundReport report;
    report.theorem_id = "thm22";
    if (sites.size() % 2 != 0) {
        // odd products vanish by spin-flip symmetry at h = 0
        report.lhs = std::abs(exact_corr(lat, sites).mean);
        report.rhs = 0;
        report.satisfied = report.lhs <= 1e-12;
        report.params = {{"odd_subset", true}};
        return report;
    }
    if (!fit.ok || !std::isfinite(fit.mu_hat))
        throw PremiseError("verify_thm22: decay fit unavailable");
    double lhs = exact_corr(lat, sites).mean;
    PointConfig A = lat.sites_config(sites);
    ExplicitConstants consts = ExplicitConstants::make(lat.dim(), fit.mu_hat);
    report.lhs = lhs;
    report.rhs = thm15_rhs_explicit(A, fit.C_hat, consts);
    report.params = {{"n_sites", sites.size()},
                     {"mu_hat", fit.mu_hat},
                     {"C_hat", fit.C_hat},
                     {"D_s", min_weight_perfect_matching(A).value},
                     {"beta", lat.beta()},
                     {"note", "explicit assembled constant, not the literal proof constant"}};
    report.settle();
    return report;
}

namespace {

// perimeter walk of the open rectangle, starting at (0,0)
std::vector<int> boundary_cycle(const IsingLattice& lat) {
    if (lat.dim() != 2)
        throw std::invalid_argument("boundary cycle requires a 2D lattice");
    int h = lat.dims()[0], w = lat.dims()[1];
    std::vector<int> cycle;
    auto idx = [&](std::int64_t r, std::int64_t c) { return lat.site_index({r, c}); };
    for (int c = 0; c < w; ++c) cycle.push_back(idx(0, c));
    for (int r = 1; r < h; ++r) cycle.push_back(idx(r, w - 1));
    if (h > 1)
        for (int c = w - 2; c >= 0; --c) cycle.push_back(idx(h - 1, c));
    if (w > 1)
        for (int r = h - 2; r >= 1; --r) cycle.push_back(idx(r, 0));
    return cycle;
}

}  // namespace

bool is_cyclic_boundary_order(const IsingLattice& lat, const std::vector<int>& sites) {
    if (std::set<int>(sites.begin(), sites.end()).size() != sites.size())
        throw std::invalid_argument("boundary sites must be distinct");
    std::vector<int> cycle = boundary_cycle(lat);
    std::vector<int> pos;
    for (int s : sites) {
        auto it = std::find(cycle.begin(), cycle.end(), s);
        if (it == cycle.end())
            throw std::invalid_argument("site is not on the lattice boundary");
        pos.push_back(static_cast<int>(it - cycle.begin()));
    }
    int n = static_cast<int>(pos.size());
    if (n <= 2) return true;
    // cyclically ordered iff the tuple walks the cycle monotonically in one
    // orientation: exactly one wraparound descent
    auto wraps = [&](const std::vector<int>& p) {
        int descents = 0;
        for (int i = 0; i < n; ++i)
            if (p[(i + 1) % n] < p[i]) ++descents;
        return descents == 1;
    };
    std::vector<int> rev(pos.rbegin(), pos.rend());
    return wraps(pos) || wraps(rev);
}

PfaffianCheck boundary_pfaffian_check(const IsingLattice& lat, const std::vector<int>& sites) {
    if (sites.size() % 2 != 0)
        throw std::invalid_argument("boundary_pfaffian_check: need an even site count");
    PfaffianCheck out;
    out.cyclic_ok = is_cyclic_boundary_order(lat, sites);

    int n = static_cast<int>(sites.size());
    RMatrix two = two_point_matrix(lat, sites);
    RMatrix skew(n, n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            skew(i, j) = two(i, j);
            skew(j, i) = -two(i, j);
        }
    out.lhs = exact_corr(lat, sites).mean;
    out.pfaffian = pfaffian(skew);
    out.gap = std::abs(out.lhs - out.pfaffian);
    return out;
}

}  // namespace corrbound
