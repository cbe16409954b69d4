#pragma once

#include <cstdint>
#include <vector>

#include "fran/linalg.hpp"
#include "fran/rng.hpp"

namespace fran {

// Inner-solver knobs for the max-min beamformer.
struct SolverParams {
    int max_outer_iters = 30;
    double outer_tol = 1e-5;       // relative min-rate improvement threshold
    int inner_max_iters = 15;      // gradient steps per temperature stage
    double inner_tol = 1e-9;
    std::vector<double> softmin_temperature_schedule = {2.0, 0.5, 0.1, 0.02};
    double step_backtrack = 0.5;
    double seed_scale = 0.5;       // fraction of P used by the initial point

    void validate() const;
};

// Full scenario description. Transmit power is carried in dB on every
// interface and converted to linear scale where rates are computed.
struct SystemConfig {
    int N = 4;           // EN-UE pairs
    int F = 60;          // library size, files
    int L = 50;          // subfiles per file
    double S = 8e8;      // file size, bits
    double mu = 0.3;     // fractional caching capacity
    int M = 2;           // connectivity level
    double C = 2.0;      // fronthaul multicast capacity, bits/symbol
    double P_dB = 20.0;  // per-EN transmit power (SNR), dB
    double gamma = 0.2;  // Zipf popularity exponent
    double alpha = 0.7;  // path-loss decay base
    int nT = 1;          // antennas per EN
    int nR = 1;          // antennas per UE
    int nS = 0;          // data streams per UE; 0 selects min(M*nT, nR)
    SolverParams solver;

    double P_linear() const;
    double subfile_bits() const { return S / L; }   // S~
    int cached_per_file() const;                    // L~ = floor(mu*L)
    int streams() const;                            // effective nS

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct Demand {
    std::vector<int> files;      // f_k, 1-based file indices, one per UE
    std::vector<int> requested;  // distinct requested files, ascending
};

struct ChannelRealization {
    int N = 0, nR = 0, nT = 0;
    std::vector<CMat> h;  // N*N blocks, h[k*N + i] is the nR x nT response EN i -> UE k

    const CMat& block(int k, int i) const { return h[size_t(k) * N + i]; }
};

// Family of unit-indexed streams for one (seed, purpose, trial).
struct StreamFactory {
    uint64_t master_seed;
    StreamPurpose purpose;
    uint64_t trial;

    RandomStream unit(uint64_t u) const { return substream(master_seed, purpose, trial, u); }
};

// The M serving ENs of UE k (all indices 1-based). The window around k is
// shifted, never truncated, when it would leave [1, N].
std::vector<int> serving_set(int k, int M, int N);

// Zipf popularity over files 1..F with exponent gamma >= 0.
std::vector<double> zipf_pmf(int F, double gamma);

// N i.i.d. draws from pmf by inverse CDF.
Demand sample_demand(RandomStream& rng, const std::vector<double>& pmf, int N);

// i.i.d. CN(0, alpha^|k-i|) entries; one unit stream per (UE, EN) block.
ChannelRealization sample_channel(const StreamFactory& streams, const SystemConfig& cfg);

}  // namespace fran
