#include "fran/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "fran/cache.hpp"
#include "fran/edge.hpp"
#include "fran/fronthaul.hpp"
#include "fran/version.hpp"

namespace fran {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double edge_latency(const std::vector<double>& rates, double s_bits) {
    double rmin = kInf;
    for (double r : rates) rmin = std::min(rmin, r);
    if (!(rmin > 0.0)) return kInf;
    return s_bits / rmin;
}

double fronthaul_latency(double sb_bits, double c) {
    if (sb_bits == 0.0) return 0.0;
    if (c == 0.0) return kInf;
    return sb_bits / c;
}

double total_latency(double t_f, double t_e) { return std::max(t_f, t_e); }

namespace {

TrialResult run_trial_impl(uint64_t master_seed, uint64_t trial_index, const SystemConfig& cfg,
                           const EdgeMemoEntry* reuse, EdgeMemoEntry* store) {
    cfg.validate();
    TrialResult out;

    StreamFactory cache_streams{master_seed, StreamPurpose::Cache, trial_index};
    StreamFactory demand_streams{master_seed, StreamPurpose::Demand, trial_index};
    StreamFactory channel_streams{master_seed, StreamPurpose::Channel, trial_index};

    CacheState cache = populate_caches(cache_streams, cfg);
    RandomStream drng = demand_streams.unit(0);
    Demand demand = sample_demand(drng, zipf_pmf(cfg.F, cfg.gamma), cfg.N);

    std::vector<std::vector<int>> serving(cfg.N);
    for (int k = 1; k <= cfg.N; ++k) serving[k - 1] = serving_set(k, cfg.M, cfg.N);

    DeliveryRequirement req = compute_requirements(cache, demand, serving);
    const double sb = cfg.subfile_bits();
    FronthaulLoad uni = unicast_bits(req, sb);
    FronthaulLoad mul = multicast_bits(req, sb);
    FronthaulLoad cod = coded_bits(req, cache, sb);
    out.S_B[int(Strategy::Unicast)] = uni.bits;
    out.S_B[int(Strategy::Multicast)] = mul.bits;
    out.S_B[int(Strategy::Coded)] = cod.bits;
    out.n_sub = cod.count;

    if (reuse) {
        out.R_min = reuse->r_min;
        out.outer_iters = reuse->outer_iters;
        out.stalled = reuse->stalled;
    } else {
        ChannelRealization ch = sample_channel(channel_streams, cfg);
        MaxMinResult mm = maximize_min_rate(ch, serving, cfg);
        out.R_min = mm.R_min;
        out.outer_iters = mm.outer_iters;
        out.stalled = mm.stalled;
    }
    if (store) *store = {out.R_min, out.outer_iters, out.stalled};

    out.T_E = out.R_min > 0.0 ? cfg.S / out.R_min : kInf;
    for (int s = 0; s < 3; ++s) {
        out.T_F[s] = fronthaul_latency(out.S_B[s], cfg.C);
        out.T_total[s] = total_latency(out.T_F[s], out.T_E);
    }
    return out;
}

}  // namespace

TrialResult run_trial(uint64_t master_seed, uint64_t trial_index, const SystemConfig& cfg) {
    return run_trial_impl(master_seed, trial_index, cfg, nullptr, nullptr);
}

std::string edge_memo_key(const SystemConfig& cfg, uint64_t master_seed) {
    char buf[512];
    std::string key;
    std::snprintf(buf, sizeof buf, "v%s N%d nT%d nR%d nS%d M%d alpha=%.17g P=%.17g seed=%llu",
                  FRAN_VERSION, cfg.N, cfg.nT, cfg.nR, cfg.streams(), cfg.M, cfg.alpha,
                  cfg.P_dB, static_cast<unsigned long long>(master_seed));
    key = buf;
    const SolverParams& sp = cfg.solver;
    std::snprintf(buf, sizeof buf, " solver=%d,%.17g,%d,%.17g,%.17g,%.17g", sp.max_outer_iters,
                  sp.outer_tol, sp.inner_max_iters, sp.inner_tol, sp.step_backtrack,
                  sp.seed_scale);
    key += buf;
    for (double t : sp.softmin_temperature_schedule) {
        std::snprintf(buf, sizeof buf, ",%.17g", t);
        key += buf;
    }
    return key;
}

namespace {

// Streaming mean/variance (Welford); latency scales make naive sum-of-squares
// aggregation lose the low bits.
struct Accum {
    long n = 0;
    double mean = 0.0, m2 = 0.0;

    void add(double x) {
        ++n;
        double d = x - mean;
        mean += d / n;
        m2 += d * (x - mean);
    }
    double ci95() const {
        if (n < 2) return 0.0;
        double sd = std::sqrt(m2 / (n - 1));
        return 1.96 * sd / std::sqrt(double(n));
    }
    double value() const { return n == 0 ? kInf : mean; }
};

}  // namespace

AggregateResult run_experiment(const SystemConfig& cfg, int n_trials, uint64_t master_seed,
                               EdgeMemo* memo) {
    cfg.validate();
    if (n_trials < 1) throw std::invalid_argument("run_experiment: n_trials must be >= 1");

    AggregateResult agg;
    agg.cfg = cfg;
    agg.n_trials = n_trials;
    agg.master_seed = master_seed;

    const std::string key = edge_memo_key(cfg, master_seed);
    bool memo_hit = memo && memo->key == key &&
                    memo->entries.size() >= static_cast<size_t>(n_trials);
    if (memo && !memo_hit) {
        memo->key = key;
        memo->entries.assign(n_trials, {});
    }

    std::array<Accum, 3> tf, te, tt;
    for (int t = 0; t < n_trials; ++t) {
        const EdgeMemoEntry* reuse = memo_hit ? &memo->entries[t] : nullptr;
        EdgeMemoEntry* store = (memo && !memo_hit) ? &memo->entries[t] : nullptr;
        TrialResult tr = run_trial_impl(master_seed, uint64_t(t), cfg, reuse, store);
        if (tr.stalled) ++agg.stalled_trials;
        for (int s = 0; s < 3; ++s) {
            if (std::isinf(tr.T_total[s])) {
                ++agg.per_strategy[s].inf_trials;
                continue;
            }
            tf[s].add(tr.T_F[s]);
            te[s].add(tr.T_E);
            tt[s].add(tr.T_total[s]);
        }
    }
    for (int s = 0; s < 3; ++s) {
        StrategyAggregate& a = agg.per_strategy[s];
        a.tf_mean = tf[s].value();
        a.tf_ci = tf[s].ci95();
        a.te_mean = te[s].value();
        a.te_ci = te[s].ci95();
        a.tt_mean = tt[s].value();
        a.tt_ci = tt[s].ci95();
    }
    return agg;
}

}  // namespace fran
