#include "fran/linalg.hpp"

#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fran {

void acc_nn(CMat& c, const CMat& a, const CMat& b) {
    assert(a.cols() == b.rows() && c.rows() == a.rows() && c.cols() == b.cols());
    kernels::active().gemm_nn_acc(a.rows(), b.cols(), a.cols(), a.data(), b.data(), c.data());
}

void acc_nh(CMat& c, const CMat& a, const CMat& b) {
    assert(a.cols() == b.cols() && c.rows() == a.rows() && c.cols() == b.rows());
    kernels::active().gemm_nh_acc(a.rows(), b.rows(), a.cols(), a.data(), b.data(), c.data());
}

void acc_hn(CMat& c, const CMat& a, const CMat& b) {
    assert(a.rows() == b.rows() && c.rows() == a.cols() && c.cols() == b.cols());
    kernels::active().gemm_hn_acc(a.cols(), b.cols(), a.rows(), a.data(), b.data(), c.data());
}

CMat mul_nn(const CMat& a, const CMat& b) {
    CMat c(a.rows(), b.cols());
    acc_nn(c, a, b);
    return c;
}

CMat mul_nh(const CMat& a, const CMat& b) {
    CMat c(a.rows(), b.rows());
    acc_nh(c, a, b);
    return c;
}

double dot_re(const CMat& a, const CMat& b) {
    assert(a.rows() == b.rows() && a.cols() == b.cols());
    return kernels::active().dot_re(a.size(), a.data(), b.data());
}

void add_scaled(CMat& y, cplx alpha, const CMat& x) {
    assert(y.rows() == x.rows() && y.cols() == x.cols());
    kernels::active().axpy(x.size(), alpha, x.data(), y.data());
}

double fro_norm(const CMat& a) { return std::sqrt(dot_re(a, a)); }

bool cholesky(const CMat& a, CMat& l) {
    const int n = a.rows();
    assert(a.cols() == n);
    if (l.rows() != n || l.cols() != n) l.resize(n, n);
    l.set_zero();
    for (int j = 0; j < n; ++j) {
        double d = a(j, j).real();
        for (int k = 0; k < j; ++k) d -= std::norm(l(j, k));
        if (!(d > 0.0) || !std::isfinite(d)) return false;
        double root = std::sqrt(d);
        l(j, j) = root;
        for (int i = j + 1; i < n; ++i) {
            cplx s = a(i, j);
            for (int k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
            l(i, j) = s / root;
        }
    }
    return true;
}

double logdet2_from_chol(const CMat& l) {
    double s = 0.0;
    for (int i = 0; i < l.rows(); ++i) s += std::log2(l(i, i).real());
    return 2.0 * s;
}

void chol_solve_inplace(const CMat& l, CMat& b) {
    const int n = l.rows();
    const int m = b.cols();
    assert(b.rows() == n);
    // forward: L y = b
    for (int i = 0; i < n; ++i) {
        for (int c = 0; c < m; ++c) {
            cplx s = b(i, c);
            for (int k = 0; k < i; ++k) s -= l(i, k) * b(k, c);
            b(i, c) = s / l(i, i).real();
        }
    }
    // backward: L^H x = y
    for (int i = n - 1; i >= 0; --i) {
        for (int c = 0; c < m; ++c) {
            cplx s = b(i, c);
            for (int k = i + 1; k < n; ++k) s -= std::conj(l(k, i)) * b(k, c);
            b(i, c) = s / l(i, i).real();
        }
    }
}

namespace {

double offdiag_sq(const CMat& a) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return s;
}

}  // namespace

EigH eig_hermitian(const CMat& a) {
    const int n = a.rows();
    assert(a.cols() == n);
    CMat m = a;
    // enforce Hermitian symmetry of the working copy
    for (int i = 0; i < n; ++i) {
        m(i, i) = cplx(m(i, i).real(), 0.0);
        for (int j = i + 1; j < n; ++j) {
            cplx avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
            m(i, j) = avg;
            m(j, i) = std::conj(avg);
        }
    }
    CMat u = CMat::identity(n);
    double scale = std::sqrt(dot_re(m, m));
    double tol = 1e-26 * std::max(1.0, scale * scale);

    for (int sweep = 0; sweep < 100 && offdiag_sq(m) > tol; ++sweep) {
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double r = std::abs(m(p, q));
                if (r < 1e-300) continue;
                cplx w = m(p, q) / r;
                double app = m(p, p).real();
                double aqq = m(q, q).real();
                double zeta = (aqq - app) / (2.0 * r);
                double t;
                if (zeta == 0.0) {
                    t = 1.0;
                } else {
                    double sg = zeta > 0.0 ? 1.0 : -1.0;
                    t = -sg / (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
                }
                double cth = 1.0 / std::sqrt(1.0 + t * t);
                double sth = t * cth;
                cplx sw = sth * w;
                cplx swc = sth * std::conj(w);

                // column transform (A <- A J)
                for (int i = 0; i < n; ++i) {
                    cplx tp = m(i, p), tq = m(i, q);
                    m(i, p) = tp * cth + tq * swc;
                    m(i, q) = -tp * sw + tq * cth;
                }
                // row transform (A <- J^H A)
                for (int j = 0; j < n; ++j) {
                    cplx tp = m(p, j), tq = m(q, j);
                    m(p, j) = cth * tp + sw * tq;
                    m(q, j) = -swc * tp + cth * tq;
                }
                m(p, q) = 0.0;
                m(q, p) = 0.0;
                m(p, p) = cplx(m(p, p).real(), 0.0);
                m(q, q) = cplx(m(q, q).real(), 0.0);
                // accumulate U <- U J
                for (int i = 0; i < n; ++i) {
                    cplx tp = u(i, p), tq = u(i, q);
                    u(i, p) = tp * cth + tq * swc;
                    u(i, q) = -tp * sw + tq * cth;
                }
            }
        }
    }

    EigH out;
    out.w.resize(n);
    for (int i = 0; i < n; ++i) out.w[i] = m(i, i).real();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) { return out.w[x] > out.w[y]; });
    EigH sorted;
    sorted.w.resize(n);
    sorted.u.resize(n, n);
    for (int j = 0; j < n; ++j) {
        sorted.w[j] = out.w[order[j]];
        for (int i = 0; i < n; ++i) sorted.u(i, j) = u(i, order[j]);
    }
    return sorted;
}

}  // namespace fran
