#pragma once

#include <complex>
#include <vector>

#include "fran/kernels.hpp"

namespace fran {

using cplx = std::complex<double>;

// Row-major dense complex matrix. Sized for the small blocks this project
// works with (edge-link channels and serving-block covariances).
class CMat {
public:
    CMat() : rows_(0), cols_(0) {}
    CMat(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols) {}

    static CMat identity(int n) {
        CMat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int size() const { return rows_ * cols_; }

    cplx& operator()(int i, int j) { return a_[size_t(i) * cols_ + j]; }
    const cplx& operator()(int i, int j) const { return a_[size_t(i) * cols_ + j]; }

    cplx* data() { return a_.data(); }
    const cplx* data() const { return a_.data(); }

    void set_zero() { std::fill(a_.begin(), a_.end(), cplx(0.0, 0.0)); }
    void resize(int rows, int cols) {
        rows_ = rows;
        cols_ = cols;
        a_.assign(size_t(rows) * cols, cplx(0.0, 0.0));
    }

private:
    int rows_, cols_;
    std::vector<cplx> a_;
};

// Accumulating products through the dispatched kernels.
void acc_nn(CMat& c, const CMat& a, const CMat& b);  // C += A * B
void acc_nh(CMat& c, const CMat& a, const CMat& b);  // C += A * B^H
void acc_hn(CMat& c, const CMat& a, const CMat& b);  // C += A^H * B

CMat mul_nn(const CMat& a, const CMat& b);
CMat mul_nh(const CMat& a, const CMat& b);

// Frobenius real inner product: sum Re(conj(a_ij) b_ij).
double dot_re(const CMat& a, const CMat& b);

// y += alpha * x (same shape).
void add_scaled(CMat& y, cplx alpha, const CMat& x);

double fro_norm(const CMat& a);

// In-place Cholesky A = L L^H for Hermitian positive-definite A; lower
// triangle of `l` is written. Returns false when A is not numerically PD.
bool cholesky(const CMat& a, CMat& l);

// log2 det(A) from its Cholesky factor.
double logdet2_from_chol(const CMat& l);

// Solve A X = B given the Cholesky factor of A; B is overwritten with X.
void chol_solve_inplace(const CMat& l, CMat& b);

struct EigH {
    std::vector<double> w;  // eigenvalues, descending
    CMat u;                 // unitary, columns are eigenvectors
};

// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
EigH eig_hermitian(const CMat& a);

}  // namespace fran
