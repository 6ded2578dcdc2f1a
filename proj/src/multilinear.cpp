#include "corrbound/multilinear.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "corrbound/errors.hpp"

namespace corrbound {

namespace {

template <typename T>
T det_lu(Mat<T> m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant: matrix not square");
    int n = m.rows();
    if (n == 0) return T{1};
    T det{1};
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(m(k, k));
        for (int i = k + 1; i < n; ++i) {
            double v = std::abs(m(i, k));
            if (v > best) { best = v; piv = i; }
        }
        if (best == 0.0) return T{0};
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
            det = -det;
        }
        det *= m(k, k);
        for (int i = k + 1; i < n; ++i) {
            T f = m(i, k) / m(k, k);
            for (int j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
        }
    }
    return det;
}

constexpr int kPermanentCap = 28;
constexpr int kPairingCap = 20;

template <typename T>
double ryser_abs(const Mat<T>& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("abs_permanent: matrix not square");
    int n = m.rows();
    if (n == 0) return 1.0;
    if (n > kPermanentCap) throw SizeCapError("abs_permanent: n exceeds cap 28");
    std::vector<double> a(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i) * n + j] = std::abs(m(i, j));

    // perm = (-1)^n sum_{S != 0} (-1)^{|S|} prod_i rowsum_i(S)
    std::vector<double> rowsum(n, 0.0);
    double total = 0.0;
    std::uint64_t gray = 0;
    std::uint64_t count = 1ULL << n;
    int popcnt = 0;
    for (std::uint64_t k = 1; k < count; ++k) {
        std::uint64_t next = k ^ (k >> 1);
        std::uint64_t changed = next ^ gray;
        int j = std::countr_zero(changed);
        bool added = (next & changed) != 0;
        popcnt += added ? 1 : -1;
        if (added)
            for (int i = 0; i < n; ++i) rowsum[i] += a[static_cast<std::size_t>(i) * n + j];
        else
            for (int i = 0; i < n; ++i) rowsum[i] -= a[static_cast<std::size_t>(i) * n + j];
        gray = next;
        double prod = 1.0;
        for (int i = 0; i < n; ++i) prod *= rowsum[i];
        total += (popcnt % 2 == 0) ? prod : -prod;
    }
    return (n % 2 == 0) ? total : -total;
}

constexpr int kPermanentDpCap = 22;  // 2^22 doubles = 32 MiB table

// row-by-row subset DP: f[S] = perm of the first |S| rows on columns S.
// Every term is nonnegative, so no cancellation at any magnitude.
template <typename T>
double permanent_dp(const Mat<T>& m) {
    int n = m.rows();
    std::vector<double> a(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i) * n + j] = std::abs(m(i, j));
    std::vector<double> f(1u << n);
    f[0] = 1.0;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        int row = std::popcount(mask) - 1;
        double total = 0.0;
        std::uint32_t probe = mask;
        while (probe) {
            int j = std::countr_zero(probe);
            probe &= probe - 1;
            total += a[static_cast<std::size_t>(row) * n + j] * f[mask & ~(1u << j)];
        }
        f[mask] = total;
    }
    return f[(1u << n) - 1];
}

double hafnian_rec(const RMatrix& W, std::uint32_t mask, std::vector<double>& memo) {
    if (mask == 0) return 1.0;
    double& slot = memo[mask];
    if (!std::isnan(slot)) return slot;
    int i = std::countr_zero(mask);
    std::uint32_t rest = mask & ~(1u << i);
    double total = 0.0;
    std::uint32_t probe = rest;
    while (probe) {
        int j = std::countr_zero(probe);
        probe &= probe - 1;
        total += W(i, j) * hafnian_rec(W, rest & ~(1u << j), memo);
    }
    slot = total;
    return total;
}

}  // namespace

cplx determinant(const CMatrix& m) { return det_lu(m); }
double determinant(const RMatrix& m) { return det_lu(m); }

namespace {

template <typename T>
double abs_permanent_impl(const Mat<T>& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("abs_permanent: matrix not square");
    int n = m.rows();
    if (n == 0) return 1.0;
    if (n > kPermanentCap) throw SizeCapError("abs_permanent: n exceeds cap 28");
    return n <= kPermanentDpCap ? permanent_dp(m) : ryser_abs(m);
}

}  // namespace

double abs_permanent(const CMatrix& m) { return abs_permanent_impl(m); }
double abs_permanent(const RMatrix& m) { return abs_permanent_impl(m); }

double abs_permanent_ryser(const CMatrix& m) { return ryser_abs(m); }
double abs_permanent_ryser(const RMatrix& m) { return ryser_abs(m); }

double hafnian(const RMatrix& W) {
    if (W.rows() != W.cols()) throw std::invalid_argument("hafnian: matrix not square");
    int n = W.rows();
    if (n % 2 != 0) throw std::invalid_argument("hafnian: odd size");
    if (n > kPairingCap) throw SizeCapError("hafnian: 2n exceeds cap 20");
    if (n == 0) return 1.0;
    std::vector<double> memo(1u << n, std::nan(""));
    return hafnian_rec(W, (1u << n) - 1, memo);
}

namespace {

template <typename T>
double pairing_sum_impl(const Mat<T>& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("pairing_sum: matrix not square");
    int n = m.rows();
    if (n % 2 != 0) throw std::invalid_argument("pairing_sum: odd size");
    RMatrix W(n, n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) W(i, j) = std::abs(m(i, j)) + std::abs(m(j, i));
    return hafnian(W);
}

}  // namespace

double pairing_sum(const CMatrix& m) { return pairing_sum_impl(m); }
double pairing_sum(const RMatrix& m) { return pairing_sum_impl(m); }

double pfaffian(const RMatrix& m, double skew_tol) {
    if (m.rows() != m.cols()) throw std::invalid_argument("pfaffian: matrix not square");
    int n = m.rows();
    if (n % 2 != 0) throw std::invalid_argument("pfaffian: odd size (undefined)");
    double asym = 0.0, scale = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = m(i, j) + m(j, i);
            asym += s * s;
            scale += m(i, j) * m(i, j);
        }
    if (std::sqrt(asym) > skew_tol * (1.0 + std::sqrt(scale)))
        throw std::invalid_argument("pfaffian: matrix not skew-symmetric");
    if (n == 0) return 1.0;

    RMatrix a = m;
    double result = 1.0;
    for (int k = 0; k + 1 < n; k += 2) {
        // pivot the largest |a(i,k)|, i > k, into row k+1
        int kp = k + 1;
        for (int i = k + 2; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(kp, k))) kp = i;
        if (kp != k + 1) {
            for (int j = 0; j < n; ++j) std::swap(a(k + 1, j), a(kp, j));
            for (int i = 0; i < n; ++i) std::swap(a(i, k + 1), a(i, kp));
            result = -result;
        }
        double piv = a(k, k + 1);
        if (piv == 0.0) return 0.0;
        result *= piv;
        if (k + 2 >= n) break;
        // rank-2 Schur update: A += tau (col k+1)^T - (col k+1) tau^T
        std::vector<double> tau(n - k - 2), col(n - k - 2);
        for (int j = k + 2; j < n; ++j) {
            tau[j - k - 2] = a(k, j) / piv;
            col[j - k - 2] = a(j, k + 1);
        }
        for (int i = k + 2; i < n; ++i)
            for (int j = k + 2; j < n; ++j)
                a(i, j) += tau[i - k - 2] * col[j - k - 2] - col[i - k - 2] * tau[j - k - 2];
    }
    return result;
}

namespace {

template <typename T>
double frob(const Mat<T>& m) {
    double s = 0.0;
    for (const auto& v : m.data()) s += std::norm(cplx(v));
    return std::sqrt(s);
}

template <typename T>
double power_norm(const Mat<T>& m) {
    int r = m.rows(), c = m.cols();
    if (r == 0 || c == 0) return 0.0;
    if (frob(m) == 0.0) return 0.0;

    std::vector<cplx> v(c), w(r), u(c);
    auto normalize = [](std::vector<cplx>& x) {
        double s = 0.0;
        for (auto& e : x) s += std::norm(e);
        s = std::sqrt(s);
        if (s > 0) for (auto& e : x) e /= s;
        return s;
    };
    for (int j = 0; j < c; ++j) v[j] = 1.0 + 1e-3 * (j + 1);  // deterministic start
    normalize(v);

    double est = 0.0;
    int settled = 0;
    bool restarted = false;
    for (int iter = 0; iter < 20000; ++iter) {
        for (int i = 0; i < r; ++i) {
            cplx s = 0.0;
            for (int j = 0; j < c; ++j) s += cplx(m(i, j)) * v[j];
            w[i] = s;
        }
        for (int j = 0; j < c; ++j) {
            cplx s = 0.0;
            for (int i = 0; i < r; ++i) s += std::conj(cplx(m(i, j))) * w[i];
            u[j] = s;
        }
        double lambda = normalize(u);  // ||M^H M v|| -> sigma_max^2
        double next = std::sqrt(std::max(lambda, 0.0));
        double change = std::abs(next - est);
        est = std::max(est, next);
        v = u;
        if (change <= 1e-13 * (est + 1e-300)) {
            if (++settled >= 3) {
                if (restarted) break;
                // one restart from a shifted vector guards a start direction
                // that happened to be orthogonal to the top singular subspace
                restarted = true;
                settled = 0;
                for (int j = 0; j < c; ++j) v[j] += 0.37 + 0.11 * ((j * 7919) % 13);
                normalize(v);
            }
        } else {
            settled = 0;
        }
    }
    return est;
}

}  // namespace

double frobenius_norm(const CMatrix& m) { return frob(m); }
double frobenius_norm(const RMatrix& m) { return frob(m); }

double spectral_norm(const CMatrix& m) { return power_norm(m); }
double spectral_norm(const RMatrix& m) { return power_norm(m); }

EigenDecomposition sym_eigendecomposition(const RMatrix& h, double sym_tol) {
    if (h.rows() != h.cols())
        throw std::invalid_argument("sym_eigendecomposition: matrix not square");
    int n = h.rows();
    double fro = frobenius_norm(h);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(h(i, j) - h(j, i)) > sym_tol * (1.0 + fro))
                throw std::invalid_argument("sym_eigendecomposition: matrix not symmetric");

    RMatrix a = h, v(n, n, 0.0);
    for (int i = 0; i < n; ++i) v(i, i) = 1.0;

    auto offdiag = [&]() {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
        return std::sqrt(s);
    };

    double target = 1e-12 * (fro > 0 ? fro : 1.0);
    for (int sweep = 0; sweep < 100 && offdiag() > target; ++sweep) {
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) {
                double apq = a(p, q);
                if (apq == 0.0) continue;
                double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
    }

    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int x, int y) { return a(x, x) < a(y, y); });

    EigenDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors = RMatrix(n, n);
    for (int j = 0; j < n; ++j) {
        out.eigenvalues[j] = a(order[j], order[j]);
        for (int i = 0; i < n; ++i) out.eigenvectors(i, j) = v(i, order[j]);
    }
    return out;
}

}  // namespace corrbound
