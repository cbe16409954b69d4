// AVX2+FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma; callers must check CPU support before using the table.

#include "fran/kernels.hpp"

#if defined(__x86_64__) && defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

namespace fran::kernels {

namespace {

inline const double* dp(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* dp(cplx* p) { return reinterpret_cast<double*>(p); }

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// C(m x n) += A(m x k) * B(k x n)
void gemm_nn_acc_avx2(int m, int n, int k, const cplx* a, const cplx* b, cplx* c) {
    const int nv = n & ~1;  // complex pairs handled 2 at a time
    for (int i = 0; i < m; ++i) {
        double* crow = dp(c + i * n);
        for (int p = 0; p < k; ++p) {
            cplx av = a[i * k + p];
            __m256d ar = _mm256_set1_pd(av.real());
            __m256d ai = _mm256_set1_pd(av.imag());
            const double* brow = dp(b + p * n);
            int j = 0;
            for (; j < nv; j += 2) {
                __m256d bv = _mm256_loadu_pd(brow + 2 * j);
                __m256d bs = _mm256_permute_pd(bv, 0x5);
                __m256d u = _mm256_mul_pd(ai, bs);
                __m256d t = _mm256_fmaddsub_pd(ar, bv, u);
                __m256d cv = _mm256_loadu_pd(crow + 2 * j);
                _mm256_storeu_pd(crow + 2 * j, _mm256_add_pd(cv, t));
            }
            for (; j < n; ++j) {
                cplx prod = av * b[p * n + j];
                c[i * n + j] += prod;
            }
        }
    }
}

// C(m x n) += A(m x k) * B(n x k)^H; inner conjugated dot over k.
void gemm_nh_acc_avx2(int m, int n, int k, const cplx* a, const cplx* b, cplx* c) {
    const int kv = k & ~1;
    for (int i = 0; i < m; ++i) {
        const double* arow = dp(a + i * k);
        for (int j = 0; j < n; ++j) {
            const double* brow = dp(b + j * k);
            __m256d acc_t = _mm256_setzero_pd();
            __m256d acc_u = _mm256_setzero_pd();
            int p = 0;
            for (; p < kv; p += 2) {
                __m256d av = _mm256_loadu_pd(arow + 2 * p);
                __m256d bv = _mm256_loadu_pd(brow + 2 * p);
                __m256d bs = _mm256_permute_pd(bv, 0x5);
                acc_t = _mm256_fmadd_pd(av, bv, acc_t);
                acc_u = _mm256_fmadd_pd(av, bs, acc_u);
            }
            // re = sum of all lanes of acc_t; im = sum(odd) - sum(even) of acc_u
            double re = hsum(acc_t);
            double im = hsum(_mm256_addsub_pd(_mm256_setzero_pd(), acc_u));
            for (; p < k; ++p) {
                cplx prod = a[i * k + p] * std::conj(b[j * k + p]);
                re += prod.real();
                im += prod.imag();
            }
            c[i * n + j] += cplx(re, im);
        }
    }
}

// C(m x n) += A(k x m)^H * B(k x n)
void gemm_hn_acc_avx2(int m, int n, int k, const cplx* a, const cplx* b, cplx* c) {
    const int nv = n & ~1;
    for (int p = 0; p < k; ++p) {
        const double* brow = dp(b + p * n);
        for (int i = 0; i < m; ++i) {
            cplx av = a[p * m + i];
            __m256d ar = _mm256_set1_pd(av.real());
            __m256d ai = _mm256_set1_pd(av.imag());
            double* crow = dp(c + i * n);
            int j = 0;
            for (; j < nv; j += 2) {
                __m256d bv = _mm256_loadu_pd(brow + 2 * j);
                __m256d bs = _mm256_permute_pd(bv, 0x5);
                __m256d u = _mm256_mul_pd(ai, bs);
                __m256d t = _mm256_fmsubadd_pd(ar, bv, u);
                __m256d cv = _mm256_loadu_pd(crow + 2 * j);
                _mm256_storeu_pd(crow + 2 * j, _mm256_add_pd(cv, t));
            }
            for (; j < n; ++j) c[i * n + j] += std::conj(av) * b[p * n + j];
        }
    }
}

double dot_re_avx2(int n, const cplx* x, const cplx* y) {
    const double* xd = dp(x);
    const double* yd = dp(y);
    const int total = 2 * n;
    const int tv = total & ~3;
    __m256d acc = _mm256_setzero_pd();
    int i = 0;
    for (; i < tv; i += 4) {
        __m256d xv = _mm256_loadu_pd(xd + i);
        __m256d yv = _mm256_loadu_pd(yd + i);
        acc = _mm256_fmadd_pd(xv, yv, acc);
    }
    double s = hsum(acc);
    for (; i < total; ++i) s += xd[i] * yd[i];
    return s;
}

void axpy_avx2(int n, cplx alpha, const cplx* x, cplx* y) {
    const int nv = n & ~1;
    __m256d ar = _mm256_set1_pd(alpha.real());
    __m256d ai = _mm256_set1_pd(alpha.imag());
    const double* xd = dp(x);
    double* yd = dp(y);
    int i = 0;
    for (; i < nv; i += 2) {
        __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        __m256d xs = _mm256_permute_pd(xv, 0x5);
        __m256d u = _mm256_mul_pd(ai, xs);
        __m256d t = _mm256_fmaddsub_pd(ar, xv, u);
        __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(yv, t));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

bool and_any_avx2(size_t nwords, const uint64_t* a, const uint64_t* b) {
    size_t i = 0;
    const size_t nv = nwords & ~size_t(3);
    for (; i < nv; i += 4) {
        __m256i av = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i bv = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        __m256i w = _mm256_and_si256(av, bv);
        if (!_mm256_testz_si256(w, w)) return true;
    }
    for (; i < nwords; ++i)
        if (a[i] & b[i]) return true;
    return false;
}

}  // namespace

namespace detail {
const Table* avx2_compiled_table() {
    static const Table t = {
        "avx2",
        gemm_nn_acc_avx2,
        gemm_nh_acc_avx2,
        gemm_hn_acc_avx2,
        dot_re_avx2,
        axpy_avx2,
        and_any_avx2,
    };
    return &t;
}
}  // namespace detail

}  // namespace fran::kernels

#else

namespace fran::kernels::detail {
const Table* avx2_compiled_table() { return nullptr; }
}  // namespace fran::kernels::detail

#endif
