#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>

namespace fran::kernels {

using cplx = std::complex<double>;

// Dense complex micro-kernels used by the rate/beamforming inner loops and
// the bitset scans of the coloring pass.  All matrices are row-major and
// contiguous (leading dimension == column count).
//
// Two implementations exist: a scalar reference and an AVX2+FMA variant.
// The active table is chosen once at startup from CPU capabilities and may
// be overridden with FRAN_KERNELS=scalar|avx2.

struct Table {
    const char* name;

    // C(m x n) += A(m x k) * B(k x n)
    void (*gemm_nn_acc)(int m, int n, int k, const cplx* a, const cplx* b, cplx* c);

    // C(m x n) += A(m x k) * B(n x k)^H
    void (*gemm_nh_acc)(int m, int n, int k, const cplx* a, const cplx* b, cplx* c);

    // C(m x n) += A(k x m)^H * B(k x n)
    void (*gemm_hn_acc)(int m, int n, int k, const cplx* a, const cplx* b, cplx* c);

    // sum_i Re(conj(x_i) * y_i)
    double (*dot_re)(int n, const cplx* x, const cplx* y);

    // y += alpha * x
    void (*axpy)(int n, cplx alpha, const cplx* x, cplx* y);

    // true iff (a_i & b_i) != 0 for some i
    bool (*and_any)(size_t nwords, const uint64_t* a, const uint64_t* b);
};

const Table& scalar_table();

// AVX2 table, or nullptr when the binary or the CPU lacks support.
const Table* avx2_table();

// The dispatched table.
const Table& active();

// Name of the active backend ("scalar" or "avx2").
const char* backend_name();

}  // namespace fran::kernels
