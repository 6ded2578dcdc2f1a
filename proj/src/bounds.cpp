#include "corrbound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "corrbound/errors.hpp"
#include "corrbound/matching.hpp"

namespace corrbound {

double compute_B(int d, double mu) {
    if (d < 1 || !(mu > 0)) throw std::invalid_argument("compute_B: need d >= 1, mu > 0");
    // f(x) = (mu/2) x - d ln(3x) is convex with minimum at x* = 2d/mu;
    // the property holds on [1, inf) iff f(max(1, x*)) >= 0
    auto f = [&](double x) { return 0.5 * mu * x - d * std::log(3.0 * x); };
    double lo = std::max(1.0, 2.0 * d / mu);
    if (f(lo) >= 0) return 1.0;
    double hi = 2.0 * lo;
    while (f(hi) < 0) hi *= 2;
    for (int iter = 0; iter < 200 && hi - lo > 1e-10; ++iter) {
        double mid = 0.5 * (lo + hi);
        if (f(mid) < 0) lo = mid;
        else hi = mid;
    }
    return hi;
}

ExplicitConstants ExplicitConstants::make(int d, double mu) {
    ExplicitConstants c;
    c.d = d;
    c.mu = mu;
    c.B = compute_B(d, mu);
    c.Cd = 2.0 * d * std::exp(1.0);
    c.geo1 = 1.0 / (1.0 - std::exp(-mu));
    c.geo2 = 1.0 / (1.0 - std::exp(-0.5 * mu));
    // the defining property, checked at the analytic minimum and on a grid
    auto ok = [&](double x) { return d * std::log(3.0 * x) <= 0.5 * mu * x + 1e-9; };
    if (!ok(c.B) || !ok(std::max(c.B, 2.0 * d / mu)))
        throw std::logic_error("ExplicitConstants: threshold property failed");
    for (int i = 0; i <= 64; ++i)
        if (!ok(c.B * (1.0 + i)))
            throw std::logic_error("ExplicitConstants: threshold property failed on grid");
    return c;
}

std::uint64_t sl_cardinality(std::int64_t l, int n) {
    if (l < 0 || n < 1) throw std::invalid_argument("sl_cardinality: need l >= 0, n >= 1");
    // C(l + n - 1, n - 1)
    unsigned __int128 num = 1;
    for (int i = 1; i <= n - 1; ++i) {
        num *= static_cast<unsigned __int128>(l + i);
        num /= static_cast<unsigned __int128>(i);  // exact: prefix products are binomials
        if (num > static_cast<unsigned __int128>(UINT64_MAX))
            throw SizeCapError("sl_cardinality: overflow beyond 64-bit range");
    }
    return static_cast<std::uint64_t>(num);
}

std::map<std::int64_t, std::uint64_t> enumerate_Ml_all(const PointConfig& X,
                                                       const PointConfig& Y) {
    if (X.size() != Y.size()) throw std::invalid_argument("enumerate_Ml: size mismatch");
    int n = X.size();
    if (n > 8) throw SizeCapError("enumerate_Ml: n exceeds enumeration cap 8");
    std::vector<std::int64_t> sd(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) sd[static_cast<std::size_t>(j) * n + k] = sup_dist(X[j], Y[k]);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::map<std::int64_t, std::uint64_t> counts;
    do {
        std::int64_t s = 0;
        for (int j = 0; j < n; ++j) s += sd[static_cast<std::size_t>(j) * n + perm[j]];
        ++counts[s];
    } while (std::next_permutation(perm.begin(), perm.end()));
    return counts;
}

std::uint64_t enumerate_Ml(const PointConfig& X, const PointConfig& Y, std::int64_t l) {
    auto counts = enumerate_Ml_all(X, Y);
    auto it = counts.find(l);
    return it == counts.end() ? 0 : it->second;
}

double counting_bound(std::int64_t l, int n, int d) {
    double cd = 2.0 * d * std::exp(1.0);
    return std::pow(cd, n) *
           std::pow((2.0 * static_cast<double>(l) + n) / n, static_cast<double>(d) * n);
}

std::int64_t sup_min_sum(const PointConfig& X, const PointConfig& Y) {
    Assignment a = min_sum_assignment(CostMatrix::from_configs(X, Y, Metric::sup));
    return static_cast<std::int64_t>(std::llround(a.value_sum));
}

double thm13_rhs_explicit(const PointConfig& X, const PointConfig& Y, double C_entry,
                          const ExplicitConstants& consts) {
    if (X.size() != Y.size()) throw std::invalid_argument("thm13_rhs_explicit: size mismatch");
    int n = X.size();
    if (n == 0) return 1.0;
    double dt = static_cast<double>(sup_min_sum(X, Y));
    double dn = static_cast<double>(consts.d) * n;
    double head = std::pow(C_entry, n) * std::pow(consts.Cd, n);
    double tail2 = std::exp(-0.5 * consts.mu * dt) * consts.geo2;
    if (dt < consts.B * n) {
        double tail1 =
            std::pow(2.0 * consts.B + 1.0, dn) * std::exp(-consts.mu * dt) * consts.geo1;
        return head * (tail1 + tail2);
    }
    return head * tail2;
}

namespace {

double binom_double(int n, int k) {
    double out = 1.0;
    for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
    return out;
}

}  // namespace

double thm15_rhs_explicit(const PointConfig& X, double C_entry,
                          const ExplicitConstants& consts) {
    if (X.size() % 2 != 0) throw std::invalid_argument("thm15_rhs_explicit: odd cardinality");
    int n = X.size() / 2;
    if (n == 0) return 1.0;
    double ds = min_weight_perfect_matching(X).value;
    double dn = static_cast<double>(consts.d) * n;
    // per-split sum bound, split independent: exponent is controlled by
    // D_s(X) <= D_s of every balanced split, and sup <= Euclidean <= sqrt(d) sup
    double per_split = std::pow(consts.Cd, n) *
                       (std::pow(2.0 * consts.B + 1.0, dn) * consts.geo1 + consts.geo2) *
                       std::exp(-0.5 * consts.mu / std::sqrt(consts.d) * ds);
    return std::pow(C_entry, n) * binom_double(2 * n, n) * per_split;
}

RMatrix kernel_matrix(const PointConfig& X, const PointConfig& Y, double mu, double C) {
    RMatrix m(X.size(), Y.size());
    for (int i = 0; i < X.size(); ++i)
        for (int j = 0; j < Y.size(); ++j) m(i, j) = C * std::exp(-mu * dist(X[i], Y[j]));
    return m;
}

RMatrix kernel_matrix(const PointConfig& X, double mu, double C) {
    return kernel_matrix(X, X, mu, C);
}

}  // namespace corrbound
