#include "fran/kernels.hpp"

namespace fran::kernels {

namespace {

void gemm_nn_acc_scalar(int m, int n, int k, const cplx* a, const cplx* b, cplx* c) {
    for (int i = 0; i < m; ++i) {
        for (int p = 0; p < k; ++p) {
            cplx av = a[i * k + p];
            const cplx* brow = b + p * n;
            cplx* crow = c + i * n;
            for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
        }
    }
}

void gemm_nh_acc_scalar(int m, int n, int k, const cplx* a, const cplx* b, cplx* c) {
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            cplx s{0.0, 0.0};
            const cplx* arow = a + i * k;
            const cplx* brow = b + j * k;
            for (int p = 0; p < k; ++p) s += arow[p] * std::conj(brow[p]);
            c[i * n + j] += s;
        }
    }
}

void gemm_hn_acc_scalar(int m, int n, int k, const cplx* a, const cplx* b, cplx* c) {
    for (int p = 0; p < k; ++p) {
        const cplx* arow = a + p * m;
        const cplx* brow = b + p * n;
        for (int i = 0; i < m; ++i) {
            cplx av = std::conj(arow[i]);
            cplx* crow = c + i * n;
            for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
        }
    }
}

double dot_re_scalar(int n, const cplx* x, const cplx* y) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        s += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    return s;
}

void axpy_scalar(int n, cplx alpha, const cplx* x, cplx* y) {
    for (int i = 0; i < n; ++i) y[i] += alpha * x[i];
}

bool and_any_scalar(size_t nwords, const uint64_t* a, const uint64_t* b) {
    for (size_t i = 0; i < nwords; ++i)
        if (a[i] & b[i]) return true;
    return false;
}

}  // namespace

const Table& scalar_table() {
    static const Table t = {
        "scalar",
        gemm_nn_acc_scalar,
        gemm_nh_acc_scalar,
        gemm_hn_acc_scalar,
        dot_re_scalar,
        axpy_scalar,
        and_any_scalar,
    };
    return t;
}

}  // namespace fran::kernels
