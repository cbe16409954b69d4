#include "fran/edge.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

namespace fran {

namespace {

constexpr double kLog2e = 1.4426950408889634;  // 1 / ln 2

void hermitize(CMat& m) {
    for (int i = 0; i < m.rows(); ++i) {
        m(i, i) = cplx(m(i, i).real(), 0.0);
        for (int j = i + 1; j < m.cols(); ++j) {
            cplx avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
            m(i, j) = avg;
            m(j, i) = std::conj(avg);
        }
    }
}

void copy_into(CMat& dst, const CMat& src) {
    dst.resize(src.rows(), src.cols());
    std::memcpy(dst.data(), src.data(), sizeof(cplx) * size_t(src.size()));
}

// a = I + sum_{l != skip} H_kl v_l H_kl^H
void noise_plus_signal(const Instance& inst, const std::vector<CMat>& vt, int k, int skip,
                       CMat& a, CMat& tmp) {
    a.resize(inst.nR, inst.nR);
    for (int i = 0; i < inst.nR; ++i) a(i, i) = 1.0;
    for (int l = 0; l < inst.N; ++l) {
        if (l == skip) continue;
        const CMat& h = inst.h(k, l);
        tmp.resize(inst.nR, inst.dim[l]);
        acc_nn(tmp, h, vt[l]);
        acc_nh(a, tmp, h);
    }
    hermitize(a);
}

double logdet2_of(const Instance& inst, const std::vector<CMat>& vt, int k, int skip) {
    CMat a, tmp, l;
    noise_plus_signal(inst, vt, k, skip, a, tmp);
    if (!cholesky(a, l)) throw std::domain_error("edge: covariance lost definiteness");
    return logdet2_from_chol(l);
}

// (1 / ln 2) * H_kl^H A^{-1} H_kl given the Cholesky factor of A.
void weighted_quadratic(const Instance& inst, const CMat& achol, int k, int l, CMat& x,
                        CMat& out) {
    const CMat& h = inst.h(k, l);
    copy_into(x, h);
    chol_solve_inplace(achol, x);
    out.resize(inst.dim[l], inst.dim[l]);
    acc_hn(out, h, x);
    for (int i = 0; i < out.size(); ++i) out.data()[i] *= kLog2e;
    hermitize(out);
}

}  // namespace

double phi(const CMat& a, const CMat& b) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw std::invalid_argument("phi: A and B must be square and same size");
    CMat l(b.rows(), b.rows());
    if (!cholesky(b, l)) throw std::domain_error("phi: B is not positive definite");
    double ld_b = logdet2_from_chol(l);
    CMat ab = a;
    for (int i = 0; i < ab.size(); ++i) ab.data()[i] += b.data()[i];
    hermitize(ab);
    if (!cholesky(ab, l)) throw std::domain_error("phi: A + B is not positive definite");
    return logdet2_from_chol(l) - ld_b;
}

double user_rate(int k, const PrecoderSet& prec, const ChannelRealization& ch) {
    const int n = ch.N, nT = ch.nT, nR = ch.nR;
    CMat hk(nR, n * nT);
    for (int i = 0; i < n; ++i) {
        const CMat& blk = ch.block(k, i);
        for (int r = 0; r < nR; ++r)
            for (int t = 0; t < nT; ++t) hk(r, i * nT + t) = blk(r, t);
    }
    CMat sig(nR, nR);
    CMat noi = CMat::identity(nR);
    CMat e(nR, prec.nS);
    for (int l = 0; l < n; ++l) {
        e.set_zero();
        acc_nn(e, hk, prec.V[l]);
        acc_nh(l == k ? sig : noi, e, e);
    }
    hermitize(sig);
    hermitize(noi);
    return phi(sig, noi);
}

Instance make_instance(const ChannelRealization& ch,
                       const std::vector<std::vector<int>>& serving, double P) {
    if (static_cast<int>(serving.size()) != ch.N)
        throw std::invalid_argument("make_instance: one serving set per UE required");
    Instance inst;
    inst.N = ch.N;
    inst.nT = ch.nT;
    inst.nR = ch.nR;
    inst.P = P;
    inst.serving = serving;
    inst.dim.resize(ch.N);
    inst.users.assign(ch.N, {});
    for (int k = 0; k < ch.N; ++k) {
        inst.dim[k] = static_cast<int>(serving[k].size()) * ch.nT;
        for (int j = 0; j < static_cast<int>(serving[k].size()); ++j) {
            int en = serving[k][j];
            if (en < 1 || en > ch.N)
                throw std::invalid_argument("make_instance: serving EN index out of range");
            inst.users[en - 1].push_back({k, j});
        }
    }
    inst.heff.resize(size_t(ch.N) * ch.N);
    for (int k = 0; k < ch.N; ++k) {
        for (int l = 0; l < ch.N; ++l) {
            CMat& he = inst.heff[size_t(k) * ch.N + l];
            he.resize(ch.nR, inst.dim[l]);
            for (int j = 0; j < static_cast<int>(serving[l].size()); ++j) {
                const CMat& blk = ch.block(k, serving[l][j] - 1);
                for (int r = 0; r < ch.nR; ++r)
                    for (int t = 0; t < ch.nT; ++t) he(r, j * ch.nT + t) = blk(r, t);
            }
        }
    }
    return inst;
}

double f1(const Instance& inst, const std::vector<CMat>& vt, int k) {
    return logdet2_of(inst, vt, k, -1);
}

double f2(const Instance& inst, const std::vector<CMat>& vt, int k) {
    return logdet2_of(inst, vt, k, k);
}

CMat grad_f1(const Instance& inst, const std::vector<CMat>& vt, int k, int l) {
    CMat a, tmp, ch, x, g;
    noise_plus_signal(inst, vt, k, -1, a, tmp);
    if (!cholesky(a, ch)) throw std::domain_error("grad_f1: covariance lost definiteness");
    weighted_quadratic(inst, ch, k, l, x, g);
    return g;
}

CMat grad_f2(const Instance& inst, const std::vector<CMat>& vt, int k, int l) {
    if (l == k) return CMat(inst.dim[l], inst.dim[l]);
    CMat a, tmp, ch, x, g;
    noise_plus_signal(inst, vt, k, k, a, tmp);
    if (!cholesky(a, ch)) throw std::domain_error("grad_f2: covariance lost definiteness");
    weighted_quadratic(inst, ch, k, l, x, g);
    return g;
}

double rate_from_cov(const Instance& inst, const std::vector<CMat>& vt, int k) {
    return f1(inst, vt, k) - f2(inst, vt, k);
}

Linearization linearize(const Instance& inst, const std::vector<CMat>& vt) {
    Linearization lin;
    lin.point = vt;
    lin.f2_at.resize(inst.N);
    lin.gamma.resize(size_t(inst.N) * inst.N);
    CMat a, tmp, ch, x;
    for (int k = 0; k < inst.N; ++k) {
        noise_plus_signal(inst, vt, k, k, a, tmp);
        if (!cholesky(a, ch)) throw std::domain_error("linearize: covariance lost definiteness");
        lin.f2_at[k] = logdet2_from_chol(ch);
        for (int l = 0; l < inst.N; ++l) {
            CMat& g = lin.gamma[size_t(k) * inst.N + l];
            if (l == k) {
                g.resize(inst.dim[l], inst.dim[l]);
                continue;
            }
            weighted_quadratic(inst, ch, k, l, x, g);
        }
    }
    return lin;
}

double surrogate(const Instance& inst, const Linearization& lin, const std::vector<CMat>& v,
                 int k) {
    double val = f1(inst, v, k) - lin.f2_at[k];
    CMat delta;
    for (int l = 0; l < inst.N; ++l) {
        if (l == k) continue;
        copy_into(delta, v[l]);
        add_scaled(delta, cplx(-1.0, 0.0), lin.point[l]);
        val -= dot_re(lin.gamma[size_t(k) * inst.N + l], delta);
    }
    return val;
}

std::vector<CMat> extract_precoders(const std::vector<CMat>& vtilde, int nS) {
    std::vector<CMat> out;
    out.reserve(vtilde.size());
    for (const CMat& vt : vtilde) {
        EigH e = eig_hermitian(vt);
        const int d = vt.rows();
        CMat v(d, nS);
        for (int j = 0; j < nS && j < d; ++j) {
            double s = std::sqrt(std::max(0.0, e.w[j]));
            for (int i = 0; i < d; ++i) v(i, j) = e.u(i, j) * s;
        }
        out.push_back(std::move(v));
    }
    return out;
}

namespace {

// Inner softmin ascent directly over the covariances Vt_l: additive gradient
// steps with a PSD eigenvalue clip, so a user whose power was traded away on
// a warm pass can still climb back once the schedule cools. The per-EN power
// cap is restored after every trial step by a diagonal congruence.
class CccpState {
public:
    CccpState(const Instance& inst, const SolverParams& sp) : inst_(inst), sp_(sp), p_(inst.P) {
        const int n = inst.N;
        v_.resize(n);
        cur_.chol.resize(n);
        cur_.g.resize(n);
        cand_eval_ = cur_;
        best_.resize(n);
        cand_.resize(n);
        grad_.resize(n);
        delta_.resize(n);
        weights_.resize(n);
    }

    // Active per-EN budget; during constraint continuation this starts far
    // below the real cap and a point feasible here stays feasible later.
    void set_power(double p) { p_ = p; }

    // Vt_k = c_k I with c_k chosen so no EN exceeds seed_scale * p at the start.
    void init_point() {
        std::vector<int> load(inst_.N);
        for (int i = 0; i < inst_.N; ++i) load[i] = static_cast<int>(inst_.users[i].size());
        for (int k = 0; k < inst_.N; ++k) {
            int worst = 1;
            for (int en : inst_.serving[k]) worst = std::max(worst, load[en - 1]);
            double c = sp_.seed_scale * p_ / (inst_.nT * worst);
            v_[k].resize(inst_.dim[k], inst_.dim[k]);
            for (int i = 0; i < inst_.dim[k]; ++i) v_[k](i, i) = c;
        }
    }

    const std::vector<CMat>& covariances() const { return v_; }

    void set_linearization(Linearization lin) {
        lin_ = std::move(lin);
        evaluate(v_, cur_);
    }

    double current_min_surrogate() const {
        return *std::min_element(cur_.g.begin(), cur_.g.end());
    }

    // One annealed ascent pass. Returns the achieved min surrogate; the
    // entry point always stays in the candidate pool, so the result never
    // falls below the entry value.
    double inner() {
        best_ = v_;
        best_gmin_ = current_min_surrogate();
        best_gsum_ = 0.0;
        for (double x : cur_.g) best_gsum_ += x;
        for (double temp : sp_.softmin_temperature_schedule) {
            for (int it = 0; it < sp_.inner_max_iters; ++it) {
                double gain = 0.0;
                if (!step(temp, gain)) break;
                if (gain < sp_.inner_tol * std::max(1.0, std::abs(softmin(cur_.g, temp))))
                    break;
            }
        }
        v_ = best_;
        evaluate(v_, cur_);
        return best_gmin_;
    }

private:
    struct Eval {
        std::vector<CMat> chol;  // per-UE Cholesky factor of A_k
        std::vector<double> g;   // per-UE surrogate value
    };

    void evaluate(const std::vector<CMat>& v, Eval& e) {
        for (int l = 0; l < inst_.N; ++l) {
            copy_into(delta_[l], v[l]);
            add_scaled(delta_[l], cplx(-1.0, 0.0), lin_.point[l]);
        }
        for (int k = 0; k < inst_.N; ++k) {
            noise_plus_signal(inst_, v, k, -1, a_, tmp_);
            if (!cholesky(a_, e.chol[k]))
                throw std::domain_error("edge solver: covariance lost definiteness");
            double val = logdet2_from_chol(e.chol[k]) - lin_.f2_at[k];
            for (int l = 0; l < inst_.N; ++l) {
                if (l == k) continue;
                val -= dot_re(lin_.gamma[size_t(k) * inst_.N + l], delta_[l]);
            }
            e.g[k] = val;
        }
    }

    // Nearest PSD point: clip negative eigenvalues to zero.
    void clip_psd(CMat& v) {
        EigH e = eig_hermitian(v);
        if (e.w.empty() || e.w.back() >= 0.0) return;
        const int d = v.rows();
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) {
                cplx s = 0.0;
                for (int i = 0; i < d; ++i)
                    if (e.w[i] > 0.0) s += e.w[i] * e.u(r, i) * std::conj(e.u(c, i));
                v(r, c) = s;
            }
        hermitize(v);
    }

    static double softmin(const std::vector<double>& g, double temp) {
        double gmin = *std::min_element(g.begin(), g.end());
        double s = 0.0;
        for (double x : g) s += std::exp(-(x - gmin) / temp);
        return gmin - temp * std::log(s);
    }

    void softmin_weights(const std::vector<double>& g, double temp) {
        double gmin = *std::min_element(g.begin(), g.end());
        double s = 0.0;
        for (int k = 0; k < inst_.N; ++k) {
            weights_[k] = std::exp(-(g[k] - gmin) / temp);
            s += weights_[k];
        }
        for (double& w : weights_) w /= s;
    }

    // Per-EN cap via diagonal congruence: scaling an EN's rows and columns
    // by sqrt(P/p) keeps every block PSD and lands the trace exactly on P.
    void power_project(std::vector<CMat>& v) const {
        for (int i = 0; i < inst_.N; ++i) {
            const auto& us = inst_.users[i];
            if (us.empty()) continue;
            double p = 0.0;
            for (auto [k, slot] : us)
                for (int r = slot * inst_.nT; r < (slot + 1) * inst_.nT; ++r)
                    p += v[k](r, r).real();
            if (p <= p_) continue;
            double s = std::sqrt(p_ / p);
            for (auto [k, slot] : us) {
                CMat& vk = v[k];
                const int lo = slot * inst_.nT, hi = (slot + 1) * inst_.nT;
                for (int r = lo; r < hi; ++r)
                    for (int c = 0; c < vk.cols(); ++c) vk(r, c) *= s;
                for (int c = lo; c < hi; ++c)
                    for (int r = 0; r < vk.rows(); ++r) vk(r, c) *= s;
            }
        }
    }

    // Lexicographic: raise the min surrogate, and among candidates tied on
    // the min (within jitter) prefer a larger total. The stored min never
    // decreases, so the caller's stall detection stays exact.
    void track_best(const std::vector<CMat>& f, const std::vector<double>& g) {
        double gmin = *std::min_element(g.begin(), g.end());
        double gsum = 0.0;
        for (double x : g) gsum += x;
        double tol = 1e-12 * std::max(1.0, std::abs(best_gmin_));
        if (gmin > best_gmin_ || (gmin >= best_gmin_ - tol && gsum > best_gsum_ + tol)) {
            best_gmin_ = std::max(best_gmin_, gmin);
            best_gsum_ = gsum;
            best_ = f;
        }
    }

    bool step(double temp, double& gain) {
        double m0 = softmin(cur_.g, temp);
        softmin_weights(cur_.g, temp);
        for (int l = 0; l < inst_.N; ++l) {
            grad_[l].resize(inst_.dim[l], inst_.dim[l]);
        }
        for (int k = 0; k < inst_.N; ++k) {
            if (weights_[k] < 1e-300) continue;
            for (int l = 0; l < inst_.N; ++l) {
                weighted_quadratic(inst_, cur_.chol[k], k, l, x_, gtmp_);
                add_scaled(grad_[l], cplx(weights_[k], 0.0), gtmp_);
                if (l != k)
                    add_scaled(grad_[l], cplx(-weights_[k], 0.0),
                               lin_.gamma[size_t(k) * inst_.N + l]);
            }
        }
        double dn = 0.0, fn = 0.0;
        for (int l = 0; l < inst_.N; ++l) {
            hermitize(grad_[l]);
            double d = fro_norm(grad_[l]);
            double f = fro_norm(v_[l]);
            dn += d * d;
            fn += f * f;
        }
        dn = std::sqrt(dn);
        fn = std::sqrt(fn);
        if (dn < 1e-300 || fn < 1e-300) return false;

        double tau = 0.5 * fn / dn;
        for (int bt = 0; bt < 30; ++bt, tau *= sp_.step_backtrack) {
            for (int l = 0; l < inst_.N; ++l) {
                copy_into(cand_[l], v_[l]);
                add_scaled(cand_[l], cplx(tau, 0.0), grad_[l]);
                clip_psd(cand_[l]);
            }
            power_project(cand_);
            evaluate(cand_, cand_eval_);
            track_best(cand_, cand_eval_.g);
            double m1 = softmin(cand_eval_.g, temp);
            if (m1 > m0) {
                v_.swap(cand_);
                std::swap(cur_, cand_eval_);
                gain = m1 - m0;
                return true;
            }
        }
        return false;
    }

    const Instance& inst_;
    const SolverParams& sp_;
    double p_;
    Linearization lin_;

    std::vector<CMat> v_, best_, cand_, grad_, delta_;
    Eval cur_, cand_eval_;
    std::vector<double> weights_;
    double best_gmin_ = -std::numeric_limits<double>::infinity();
    double best_gsum_ = -std::numeric_limits<double>::infinity();

    CMat a_, tmp_, x_, gtmp_;
};

}  // namespace

MaxMinResult maximize_min_rate(const ChannelRealization& ch,
                               const std::vector<std::vector<int>>& serving,
                               const SystemConfig& cfg) {
    cfg.solver.validate();
    Instance inst = make_instance(ch, serving, cfg.P_linear());
    const int nS = cfg.streams();

    CccpState state(inst, cfg.solver);

    // Constraint continuation: the power cap climbs a fixed half-decade
    // ladder, advancing one rung whenever the min-rate improvement stalls,
    // and only the top rung is the real budget P. A cap-s point stays
    // feasible at every larger cap and the rates never reference the cap,
    // so the min-rate history is non-decreasing across rung changes. The
    // rungs are absolute (not relative to P): two solves of one channel at
    // budgets P1 < P2 above the ladder base execute identical iterations
    // through P1's termination point, so the solved rate cannot drop when
    // the budget grows along a 5 dB grid.
    std::vector<double> caps;
    for (int j = 0; j < 64; ++j) {
        double s = std::pow(10.0, 0.5 * j - 1.0);
        if (!(s < inst.P)) break;
        caps.push_back(s);
    }
    caps.push_back(inst.P);
    size_t stage = 0;
    state.set_power(caps[0]);
    state.init_point();

    MaxMinResult res;
    double prev_min = 0.0;
    bool have_prev = false;
    int inner_runs = 0;
    int rung_iters = 0;
    std::vector<CMat> vt;
    while (true) {
        vt = state.covariances();
        Linearization lin = linearize(inst, vt);

        double rmin = std::numeric_limits<double>::infinity();
        double terr = 0.0;
        for (int k = 0; k < inst.N; ++k) {
            double g = rate_from_cov(inst, vt, k);
            double gh = surrogate(inst, lin, vt, k);
            terr = std::max(terr, std::abs(gh - g));
            rmin = std::min(rmin, g);
        }
        state.set_linearization(std::move(lin));
        res.min_rate_history.push_back(rmin);
        res.max_tightness_err = std::max(res.max_tightness_err, terr);

        // Each rung has its own iteration budget; the advance rule never
        // references the final P, which keeps runs at different budgets on
        // identical trajectories while their caps agree.
        const bool stalled_here =
            have_prev &&
            rmin - prev_min < cfg.solver.outer_tol * std::max(1.0, std::abs(prev_min));
        if (stalled_here || rung_iters >= cfg.solver.max_outer_iters) {
            if (stage + 1 == caps.size()) break;
            ++stage;
            state.set_power(caps[stage]);
            rung_iters = 0;
        }
        prev_min = rmin;
        have_prev = true;

        double entry = state.current_min_surrogate();
        double achieved = state.inner();
        ++inner_runs;
        ++rung_iters;
        if (achieved < entry - cfg.solver.inner_tol - 1e-12) {
            res.stalled = true;
            break;
        }
    }
    res.outer_iters = inner_runs;

    res.prec.N = inst.N;
    res.prec.nT = inst.nT;
    res.prec.nS = nS;
    res.prec.support = serving;
    res.prec.Vtilde = vt;
    std::vector<CMat> local = extract_precoders(vt, nS);
    res.prec.V.resize(inst.N);
    for (int k = 0; k < inst.N; ++k) {
        CMat& v = res.prec.V[k];
        v.resize(inst.N * inst.nT, nS);
        for (int j = 0; j < static_cast<int>(serving[k].size()); ++j) {
            int base = (serving[k][j] - 1) * inst.nT;
            for (int t = 0; t < inst.nT; ++t)
                for (int c = 0; c < nS; ++c) v(base + t, c) = local[k](j * inst.nT + t, c);
        }
    }
    res.rates.resize(inst.N);
    double rmin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < inst.N; ++k) {
        res.rates[k] = user_rate(k, res.prec, ch);
        rmin = std::min(rmin, res.rates[k]);
    }
    res.R_min = rmin;
    return res;
}

}  // namespace fran
