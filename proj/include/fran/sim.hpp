#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "fran/fronthaul.hpp"
#include "fran/model.hpp"

namespace fran {

// Latency composition: fronthaul and edge links run pipelined, so the total
// is the slower of the two.
double edge_latency(const std::vector<double>& rates, double s_bits);
double fronthaul_latency(double sb_bits, double c);
double total_latency(double t_f, double t_e);

// Everything measured on one realization of (cache, demand, channel).
// Strategy-indexed arrays follow the Strategy enum order.
struct TrialResult {
    std::array<double, 3> S_B{};      // fronthaul payload, bits
    std::array<double, 3> T_F{};      // symbols
    double T_E = 0.0;                 // symbols, strategy-independent
    std::array<double, 3> T_total{};  // symbols
    double R_min = 0.0;               // bits/symbol from extracted precoders
    long n_sub = 0;                   // coded transmissions
    int outer_iters = 0;
    bool stalled = false;
};

TrialResult run_trial(uint64_t master_seed, uint64_t trial_index, const SystemConfig& cfg);

// Memo for the edge optimizer across sweep points that share every
// rate-relevant parameter (the caching axis does not touch the channel),
// keyed so a mismatch silently falls back to recomputation.
struct EdgeMemoEntry {
    double r_min;
    int outer_iters;
    bool stalled;
};

struct EdgeMemo {
    std::string key;
    std::vector<EdgeMemoEntry> entries;
};

std::string edge_memo_key(const SystemConfig& cfg, uint64_t master_seed);

struct StrategyAggregate {
    double tf_mean = 0.0, tf_ci = 0.0;
    double te_mean = 0.0, te_ci = 0.0;
    double tt_mean = 0.0, tt_ci = 0.0;
    long inf_trials = 0;  // excluded from the means above
};

struct AggregateResult {
    std::array<StrategyAggregate, 3> per_strategy;
    int n_trials = 0;
    SystemConfig cfg;
    uint64_t master_seed = 0;
    long stalled_trials = 0;
};

AggregateResult run_experiment(const SystemConfig& cfg, int n_trials, uint64_t master_seed,
                               EdgeMemo* memo = nullptr);

}  // namespace fran
