#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "corrbound/errors.hpp"
#include "corrbound/multilinear.hpp"
#include "corrbound/rng.hpp"
#include "oracles.hpp"

using namespace corrbound;

namespace {

CMatrix random_cmatrix(Rng& rng, int n) {
    CMatrix m(n, n);
    for (auto& e : m.data()) e = cplx(rng.normal(), rng.normal());
    return m;
}

RMatrix random_rmatrix(Rng& rng, int rows, int cols) {
    RMatrix m(rows, cols);
    for (auto& e : m.data()) e = rng.normal();
    return m;
}

}  // namespace

TEST_CASE("determinant basics") {
    RMatrix eye(4, 4, 0.0);
    for (int i = 0; i < 4; ++i) eye(i, i) = 1.0;
    CHECK(determinant(eye) == 1.0);
    RMatrix d(2, 2, 0.0);
    d(0, 0) = 2;
    d(1, 1) = 3;
    CHECK(determinant(d) == 6.0);
    RMatrix sing(2, 2, 1.0);
    CHECK(determinant(sing) == 0.0);
}

TEST_CASE("determinant matches cofactor expansion") {
    Rng rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        CMatrix m = random_cmatrix(rng, 5);
        cplx lu = determinant(m);
        cplx co = oracles::det_cofactor(m);
        CHECK(std::abs(lu - co) <= 1e-10 * (1.0 + std::abs(co)));
    }
}

TEST_CASE("permanent basics and caps") {
    RMatrix ones(2, 2, 1.0);
    CHECK(abs_permanent(ones) == 2.0);
    RMatrix eye(5, 5, 0.0);
    for (int i = 0; i < 5; ++i) eye(i, i) = 1.0;
    CHECK(abs_permanent(eye) == 1.0);
    RMatrix big(29, 29, 0.0);
    CHECK_THROWS_AS(abs_permanent(big), SizeCapError);
}

TEST_CASE("permanent matches full enumeration") {
    Rng rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        CMatrix m = random_cmatrix(rng, 6);
        double fast = abs_permanent(m);
        double brute = oracles::permanent_enumerated(m);
        CHECK(fast == doctest::Approx(brute).epsilon(1e-12));
    }
}

TEST_CASE("dp and ryser permanents agree on well-conditioned input") {
    Rng rng(21);
    for (int n : {2, 5, 8, 10}) {
        RMatrix m(n, n);
        for (auto& e : m.data()) e = std::abs(rng.normal()) + 0.1;
        CHECK(abs_permanent(m) == doctest::Approx(abs_permanent_ryser(m)).epsilon(1e-10));
    }
}

TEST_CASE("permanent keeps relative accuracy at tiny magnitudes") {
    // diagonal entries e^{-50}: the permanent is e^{-300}, ten orders below
    // Ryser's alternating-sum noise floor for O(1)-entry matrices, but exact
    // for the cancellation-free DP
    int n = 6;
    RMatrix m(n, n, 0.0);
    for (int i = 0; i < n; ++i) m(i, i) = std::exp(-50.0);
    double expected = std::exp(-300.0);
    CHECK(abs_permanent(m) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("|det| <= permanent of absolute values") {
    Rng rng(13);
    for (int trial = 0; trial < 40; ++trial) {
        int n = rng.range(1, 8);
        CMatrix m = random_cmatrix(rng, n);
        CHECK(std::abs(determinant(m)) <= abs_permanent(m) * (1 + 1e-12));
    }
}

TEST_CASE("pairing sum matches enumeration") {
    Rng rng(14);
    for (int n2 : {2, 4, 6, 8}) {
        CMatrix m = random_cmatrix(rng, n2);
        double fast = pairing_sum(m);
        double brute = oracles::pairing_sum_enumerated(m);
        CHECK(fast == doctest::Approx(brute).epsilon(1e-10));
    }
}

TEST_CASE("pairing sum closed forms") {
    RMatrix two(2, 2, 0.0);
    two(0, 1) = 3.0;
    two(1, 0) = 0.5;
    CHECK(pairing_sum(two) == 3.5);  // |m12| + |m21|
    RMatrix ones(4, 4, 1.0);
    CHECK(pairing_sum(ones) == doctest::Approx(12.0));  // 2^2 * 3 pairings
    RMatrix odd(3, 3, 1.0);
    CHECK_THROWS_AS(pairing_sum(odd), std::invalid_argument);
}

TEST_CASE("hafnian of a two-pair block") {
    RMatrix w(4, 4, 0.0);
    // single perfect matching weight test: w(0,1) w(2,3) + w(0,2) w(1,3) + w(0,3) w(1,2)
    int idx = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            w(i, j) = ++idx;  // 1..6
            w(j, i) = w(i, j);
        }
    CHECK(hafnian(w) == doctest::Approx(1 * 6 + 2 * 5 + 3 * 4));
}

TEST_CASE("pfaffian definition at small sizes") {
    RMatrix two(2, 2, 0.0);
    two(0, 1) = 1.75;
    two(1, 0) = -1.75;
    CHECK(pfaffian(two) == 1.75);

    Rng rng(15);
    for (int trial = 0; trial < 20; ++trial) {
        RMatrix m(4, 4, 0.0);
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                double v = rng.normal();
                m(i, j) = v;
                m(j, i) = -v;
            }
        double expanded = m(0, 1) * m(2, 3) - m(0, 2) * m(1, 3) + m(0, 3) * m(1, 2);
        CHECK(pfaffian(m) == doctest::Approx(expanded).epsilon(1e-12));
    }
}

TEST_CASE("pfaffian squared is the determinant") {
    Rng rng(16);
    for (int n2 : {2, 4, 6, 8, 10, 12}) {
        RMatrix m(n2, n2, 0.0);
        for (int i = 0; i < n2; ++i)
            for (int j = i + 1; j < n2; ++j) {
                double v = rng.normal();
                m(i, j) = v;
                m(j, i) = -v;
            }
        double pf = pfaffian(m);
        double det = determinant(m);
        CHECK(pf * pf == doctest::Approx(det).epsilon(1e-8));
    }
}

TEST_CASE("pfaffian rejects bad input") {
    RMatrix odd(3, 3, 0.0);
    CHECK_THROWS_AS(pfaffian(odd), std::invalid_argument);
    RMatrix notskew(2, 2, 1.0);
    CHECK_THROWS_AS(pfaffian(notskew), std::invalid_argument);
}

TEST_CASE("norm examples") {
    RMatrix d(2, 2, 0.0);
    d(0, 0) = 3;
    d(1, 1) = 1;
    CHECK(spectral_norm(d) == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(frobenius_norm(d) == doctest::Approx(std::sqrt(10.0)));

    // rank one: spectral and Frobenius agree at ||u|| ||v||
    Rng rng(17);
    std::vector<double> u(5), v(7);
    double nu = 0, nv = 0;
    for (auto& e : u) { e = rng.normal(); nu += e * e; }
    for (auto& e : v) { e = rng.normal(); nv += e * e; }
    RMatrix r1(5, 7);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 7; ++j) r1(i, j) = u[i] * v[j];
    double expected = std::sqrt(nu * nv);
    CHECK(spectral_norm(r1) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(frobenius_norm(r1) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("spectral norm below Frobenius norm") {
    Rng rng(18);
    for (int trial = 0; trial < 500; ++trial) {
        RMatrix m = random_rmatrix(rng, rng.range(1, 6), rng.range(1, 6));
        CHECK(spectral_norm(m) <= frobenius_norm(m) * (1 + 1e-9));
    }
}

TEST_CASE("hadamard inequality for determinants") {
    Rng rng(19);
    for (int trial = 0; trial < 100; ++trial) {
        int n = rng.range(1, 7);
        CMatrix m = random_cmatrix(rng, n);
        double prod = 1;
        for (int i = 0; i < n; ++i) {
            double row = 0;
            for (int j = 0; j < n; ++j) row += std::norm(m(i, j));
            prod *= std::sqrt(row);
        }
        CHECK(std::abs(determinant(m)) <= prod * (1 + 1e-12));
    }
}

TEST_CASE("jacobi eigendecomposition") {
    RMatrix diag(3, 3, 0.0);
    diag(0, 0) = 4;
    diag(1, 1) = -1;
    diag(2, 2) = 2;
    EigenDecomposition e = sym_eigendecomposition(diag);
    CHECK(e.eigenvalues == std::vector<double>{-1, 2, 4});

    RMatrix swap(2, 2, 0.0);
    swap(0, 1) = 1;
    swap(1, 0) = 1;
    EigenDecomposition s = sym_eigendecomposition(swap);
    CHECK(s.eigenvalues[0] == doctest::Approx(-1.0));
    CHECK(s.eigenvalues[1] == doctest::Approx(1.0));

    Rng rng(20);
    int n = 50;
    RMatrix h(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double v = rng.normal();
            h(i, j) = v;
            h(j, i) = v;
        }
    EigenDecomposition big = sym_eigendecomposition(h);
    double hf = frobenius_norm(h);

    // residual ||H V - V Lambda||_F and orthogonality ||V^T V - I||
    double resid = 0, ortho = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double hv = 0, vtv = 0;
            for (int k = 0; k < n; ++k) {
                hv += h(i, k) * big.eigenvectors(k, j);
                vtv += big.eigenvectors(k, i) * big.eigenvectors(k, j);
            }
            hv -= big.eigenvectors(i, j) * big.eigenvalues[j];
            resid += hv * hv;
            double target = i == j ? 1.0 : 0.0;
            ortho = std::max(ortho, std::abs(vtv - target));
        }
    CHECK(std::sqrt(resid) <= 1e-8 * hf);
    CHECK(ortho <= 1e-10);
    for (int j = 1; j < n; ++j) CHECK(big.eigenvalues[j - 1] <= big.eigenvalues[j]);

    RMatrix nonsym(2, 2, 0.0);
    nonsym(0, 1) = 1.0;
    CHECK_THROWS_AS(sym_eigendecomposition(nonsym), std::invalid_argument);
}
