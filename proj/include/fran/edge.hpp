#pragma once

#include <utility>
#include <vector>

#include "fran/linalg.hpp"
#include "fran/model.hpp"

namespace fran {

// phi(A, B) = log2 det(A + B) - log2 det(B) for PSD A and PD B.
// Throws std::domain_error when B (or A + B) fails the Cholesky test.
double phi(const CMat& a, const CMat& b);

// Beamformers of one realization. V is stacked over all ENs with zero rows
// outside the serving support; Vtilde lives on the serving block only.
struct PrecoderSet {
    int N = 0, nT = 0, nS = 0;
    std::vector<std::vector<int>> support;  // per UE, serving ENs, 1-based
    std::vector<CMat> V;                    // per UE, (N*nT) x nS
    std::vector<CMat> Vtilde;               // per UE, D_k x D_k, D_k = |support|*nT
};

// R_k with interference treated as noise, computed from the stacked V.
double user_rate(int k, const PrecoderSet& prec, const ChannelRealization& ch);

// One max-min problem instance: effective serving-cluster channels and the
// per-EN membership map used by the power projection.
struct Instance {
    int N = 0, nT = 0, nR = 0;
    double P = 0.0;
    std::vector<std::vector<int>> serving;  // per UE, 1-based
    std::vector<int> dim;                   // D_l = |serving[l]| * nT
    std::vector<CMat> heff;                 // N*N, heff[k*N+l]: nR x D_l

    // users[i]: (UE k, slot j) pairs with serving[k][j] == i+1
    std::vector<std::vector<std::pair<int, int>>> users;

    const CMat& h(int k, int l) const { return heff[size_t(k) * N + l]; }
};

Instance make_instance(const ChannelRealization& ch,
                       const std::vector<std::vector<int>>& serving, double P);

// f1_k = log2 det(I + sum_l H_kl Vt_l H_kl^H); f2_k drops the l = k term.
// Both are concave in the covariance list Vt.
double f1(const Instance& inst, const std::vector<CMat>& vt, int k);
double f2(const Instance& inst, const std::vector<CMat>& vt, int k);

// Hermitian gradients d f1_k / d Vt_l and d f2_k / d Vt_l; the directional
// derivative along a Hermitian E is dot_re(grad, E).
CMat grad_f1(const Instance& inst, const std::vector<CMat>& vt, int k, int l);
CMat grad_f2(const Instance& inst, const std::vector<CMat>& vt, int k, int l);

// Rate of UE k under covariances: f1_k - f2_k.
double rate_from_cov(const Instance& inst, const std::vector<CMat>& vt, int k);

// First-order expansion of every f2_k around the point vt; makes the
// surrogates ghat_k(v) = f1_k(v) - f2_k(vt) - sum_{l != k} <gamma_kl, v_l - vt_l>
// concave global lower bounds on the rates, tight at vt.
struct Linearization {
    std::vector<double> f2_at;  // per k
    std::vector<CMat> gamma;    // N*N, gamma[k*N+l], zero matrix for l == k
    std::vector<CMat> point;    // copy of vt
};

Linearization linearize(const Instance& inst, const std::vector<CMat>& vt);

double surrogate(const Instance& inst, const Linearization& lin,
                 const std::vector<CMat>& v, int k);

// Leading-eigenpair truncation: V_k = U_{1:nS} diag(sqrt(lambda_{1:nS})),
// eigenvalues descending, negative ones clamped to zero.
std::vector<CMat> extract_precoders(const std::vector<CMat>& vtilde, int nS);

struct MaxMinResult {
    PrecoderSet prec;
    std::vector<double> rates;  // recomputed from the extracted precoders
    double R_min = 0.0;

    std::vector<double> min_rate_history;  // relaxed min-rate per outer iterate
    double max_tightness_err = 0.0;        // worst |ghat_k(vt) - g_k(vt)|
    int outer_iters = 0;
    bool stalled = false;
};

// CCCP outer loop around a softmin ascent inner step; see SolverParams for
// the schedule knobs.
MaxMinResult maximize_min_rate(const ChannelRealization& ch,
                               const std::vector<std::vector<int>>& serving,
                               const SystemConfig& cfg);

}  // namespace fran
