#pragma once
#include <cstdint>
#include <map>

#include "corrbound/geometry.hpp"
#include "corrbound/multilinear.hpp"
#include "corrbound/report.hpp"

namespace corrbound {

// Smallest B >= 1 with (3x)^d <= exp(mu x / 2) for all x >= B (bisection).
double compute_B(int d, double mu);

// Constants assembled from the counting/geometric-series proofs. Everything
// needed to evaluate the explicit sum- and pairing-bound right-hand sides.
struct ExplicitConstants {
    int d = 1;
    double mu = 1.0;
    double B = 1.0;     // threshold where (3x)^d <= e^{mu x/2} kicks in
    double Cd = 0.0;    // 2 d e, the per-point counting constant
    double geo1 = 0.0;  // 1 / (1 - e^{-mu})
    double geo2 = 0.0;  // 1 / (1 - e^{-mu/2})

    static ExplicitConstants make(int d, double mu);
};

// Exact C(l + n - 1, n - 1) via 128-bit arithmetic; throws on overflow.
std::uint64_t sl_cardinality(std::int64_t l, int n);

// Exact count of permutations whose sup-distance sum equals l (n <= 8).
std::uint64_t enumerate_Ml(const PointConfig& X, const PointConfig& Y, std::int64_t l);
// All realized (l -> count) in one enumeration pass.
std::map<std::int64_t, std::uint64_t> enumerate_Ml_all(const PointConfig& X,
                                                       const PointConfig& Y);

// The counting-lemma ceiling (2de)^n ((2l+n)/n)^{dn}.
double counting_bound(std::int64_t l, int n, int d);

// Sup-metric min-sum assignment value (exact integer).
std::int64_t sup_min_sum(const PointConfig& X, const PointConfig& Y);

// Explicit RHS of the sum-distance determinant/permanent bound:
//   C_entry^n Cd^n [ (2B+1)^{dn} e^{-mu Dt} geo1 + e^{-mu Dt/2} geo2 ]   (Dt < B n)
//   C_entry^n Cd^n e^{-mu Dt/2} geo2                                     (Dt >= B n)
// where Dt is the sup-metric min-sum distance.
double thm13_rhs_explicit(const PointConfig& X, const PointConfig& Y, double C_entry,
                          const ExplicitConstants& consts);

// Explicit RHS of the pairing-sum bound: binom(2n, n) times a split-
// independent sum bound with exponent exp(-mu/(2 sqrt d) * D_s(X)).
double thm15_rhs_explicit(const PointConfig& X, double C_entry,
                          const ExplicitConstants& consts);

// Kernel matrices exp(-mu |x_j - y_k|) used as bound-check inputs.
RMatrix kernel_matrix(const PointConfig& X, const PointConfig& Y, double mu,
                      double C = 1.0);
RMatrix kernel_matrix(const PointConfig& X, double mu, double C = 1.0);

}  // namespace corrbound
