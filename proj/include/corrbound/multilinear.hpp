#pragma once
#include <complex>
#include <cstdint>
#include <vector>

namespace corrbound {

using cplx = std::complex<double>;

// Dense row-major matrix. Everything at desk scale, no sparsity.
template <typename T>
class Mat {
public:
    Mat() : rows_(0), cols_(0) {}
    Mat(int rows, int cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    T& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    const T& operator()(int i, int j) const {
        return data_[static_cast<std::size_t>(i) * cols_ + j];
    }
    const std::vector<T>& data() const { return data_; }
    std::vector<T>& data() { return data_; }

private:
    int rows_, cols_;
    std::vector<T> data_;
};

using RMatrix = Mat<double>;
using CMatrix = Mat<cplx>;

inline CMatrix to_complex(const RMatrix& m) {
    CMatrix out(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
    return out;
}

// LU with partial pivoting; singular matrices give 0.
cplx determinant(const CMatrix& m);
double determinant(const RMatrix& m);

// Permanent of |entries|, n <= 28. Entries are nonnegative, so a subset-sum
// DP (O(2^n n) like Ryser, but cancellation-free) carries full relative
// accuracy even for values near the underflow threshold; Ryser's Gray-code
// formula takes over past n = 22 where the DP table would not fit.
double abs_permanent(const CMatrix& m);
double abs_permanent(const RMatrix& m);

// Ryser's alternating formula, kept as a cross-check; its absolute error
// floor is set by the row-sum magnitudes, not by the result.
double abs_permanent_ryser(const CMatrix& m);
double abs_permanent_ryser(const RMatrix& m);

// Sum over perfect matchings of prod W(a,b): the hafnian of W.
// Memoized recursion pairing the lowest unpaired index, even size <= 20.
double hafnian(const RMatrix& W);

// (1/n!) sum over S_2n of prod |m_{pi(2j-1) pi(2j)}|; equals the hafnian of
// the symmetrized matrix |m_jk| + |m_kj|.
double pairing_sum(const CMatrix& m);
double pairing_sum(const RMatrix& m);

// Parlett-Reid skew tridiagonalization with pivoting; even size only.
double pfaffian(const RMatrix& m, double skew_tol = 1e-10);

double frobenius_norm(const CMatrix& m);
double frobenius_norm(const RMatrix& m);

// Largest singular value via power iteration on M^H M, relative tol 1e-10.
double spectral_norm(const CMatrix& m);
double spectral_norm(const RMatrix& m);

struct EigenDecomposition {
    std::vector<double> eigenvalues;  // ascending
    RMatrix eigenvectors;             // columns, orthonormal
};

// Cyclic Jacobi rotations for real symmetric input.
EigenDecomposition sym_eigendecomposition(const RMatrix& h, double sym_tol = 1e-9);

}  // namespace corrbound
