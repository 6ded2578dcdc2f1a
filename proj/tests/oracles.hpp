// Brute-force reference evaluators for the test suites. These stay
// independent of the library's fast paths: cofactor expansion instead of LU,
// explicit permutation sums instead of Ryser/DP.
#pragma once
#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "corrbound/multilinear.hpp"

namespace oracles {

inline corrbound::cplx det_cofactor(const corrbound::CMatrix& m) {
    int n = m.rows();
    if (n == 0) return 1.0;
    if (n == 1) return m(0, 0);
    corrbound::cplx total = 0.0;
    for (int j = 0; j < n; ++j) {
        corrbound::CMatrix minor(n - 1, n - 1);
        for (int r = 1; r < n; ++r) {
            int cc = 0;
            for (int c = 0; c < n; ++c) {
                if (c == j) continue;
                minor(r - 1, cc++) = m(r, c);
            }
        }
        corrbound::cplx term = m(0, j) * det_cofactor(minor);
        total += (j % 2 == 0) ? term : -term;
    }
    return total;
}

template <typename T>
double permanent_enumerated(const corrbound::Mat<T>& m) {
    int n = m.rows();
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double total = 0;
    do {
        double prod = 1;
        for (int j = 0; j < n; ++j) prod *= std::abs(m(j, perm[j]));
        total += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

// (1/n!) sum over all of S_2n of prod |m_{pi(2j-1) pi(2j)}|
template <typename T>
double pairing_sum_enumerated(const corrbound::Mat<T>& m) {
    int n2 = m.rows();
    std::vector<int> perm(n2);
    std::iota(perm.begin(), perm.end(), 0);
    double total = 0;
    do {
        double prod = 1;
        for (int j = 0; j + 1 < n2; j += 2) prod *= std::abs(m(perm[j], perm[j + 1]));
        total += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    double fact = 1;
    for (int i = 2; i <= n2 / 2; ++i) fact *= i;
    return total / fact;
}

// sum over pi with pi(1) < pi(3) < ... < pi(2n-1) of prod m_{pi(2j-1) pi(2j)},
// signed or not depending on the entries handed in
template <typename T>
double ordered_pairing_enumerated(const corrbound::Mat<T>& m) {
    int n2 = m.rows();
    std::vector<int> perm(n2);
    std::iota(perm.begin(), perm.end(), 0);
    double total = 0;
    do {
        bool ordered = true;
        for (int j = 0; j + 2 < n2; j += 2)
            if (perm[j] > perm[j + 2]) { ordered = false; break; }
        if (!ordered) continue;
        double prod = 1;
        for (int j = 0; j + 1 < n2; j += 2) prod *= std::real(corrbound::cplx(m(perm[j], perm[j + 1])));
        total += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

}  // namespace oracles
