#include "fran/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fran {

namespace {

void require(bool ok, const std::string& field, const std::string& what) {
    if (!ok) throw std::invalid_argument(field + ": " + what);
}

}  // namespace

void SolverParams::validate() const {
    require(max_outer_iters >= 1, "solver_max_outer_iters", "must be >= 1");
    require(outer_tol > 0, "solver_outer_tol", "must be > 0");
    require(inner_max_iters >= 1, "solver_inner_max_iters", "must be >= 1");
    require(inner_tol > 0, "solver_inner_tol", "must be > 0");
    require(!softmin_temperature_schedule.empty(), "solver_temperatures", "must be non-empty");
    for (size_t i = 0; i < softmin_temperature_schedule.size(); ++i) {
        require(softmin_temperature_schedule[i] > 0, "solver_temperatures", "entries must be > 0");
        if (i > 0)
            require(softmin_temperature_schedule[i] < softmin_temperature_schedule[i - 1],
                    "solver_temperatures", "must be strictly decreasing");
    }
    require(step_backtrack > 0 && step_backtrack < 1, "solver_step_backtrack", "must be in (0,1)");
    require(seed_scale > 0 && seed_scale <= 1, "solver_seed_scale", "must be in (0,1]");
}

double SystemConfig::P_linear() const { return std::pow(10.0, P_dB / 10.0); }

int SystemConfig::cached_per_file() const {
    // decimal inputs like 0.29*100 land a hair below the integer
    return static_cast<int>(std::floor(mu * L + 1e-9));
}

int SystemConfig::streams() const {
    if (nS > 0) return nS;
    return std::min(M * nT, nR);
}

void SystemConfig::validate() const {
    require(N >= 1, "N", "must be >= 1");
    require(F >= 1, "F", "must be >= 1");
    require(L >= 1, "L", "must be >= 1");
    require(S > 0 && std::isfinite(S), "S_bits", "must be positive and finite");
    require(mu >= 0.0 && mu <= 1.0, "mu", "must be in [0,1]");
    require(M >= 1 && M <= N, "M", "must be in [1,N]");
    require(C >= 0.0 && std::isfinite(C), "C", "must be >= 0 and finite");
    require(std::isfinite(P_dB), "P_dB", "must be finite");
    require(gamma >= 0.0, "gamma", "must be >= 0");
    require(alpha > 0.0 && alpha < 1.0, "alpha", "must be in (0,1)");
    require(nT >= 1, "nT", "must be >= 1");
    require(nR >= 1, "nR", "must be >= 1");
    if (nS != 0)
        require(nS >= 1 && nS <= std::min(N * nT, nR), "nS",
                "must be in [1, min(N*nT, nR)]");
    solver.validate();
}

std::vector<int> serving_set(int k, int M, int N) {
    if (N < 1 || M < 1 || M > N) throw std::invalid_argument("M: must be in [1,N]");
    if (k < 1 || k > N) throw std::invalid_argument("k: UE index out of range");
    int lo = k - (M - 1) / 2;
    int hi = k + M / 2;
    if (lo < 1) {  // shift the window, keep exactly M ENs
        hi += 1 - lo;
        lo = 1;
    }
    if (hi > N) {
        lo -= hi - N;
        hi = N;
    }
    std::vector<int> out;
    out.reserve(M);
    for (int i = lo; i <= hi; ++i) out.push_back(i);
    return out;
}

std::vector<double> zipf_pmf(int F, double gamma) {
    if (F < 1) throw std::invalid_argument("F: must be >= 1");
    if (gamma < 0) throw std::invalid_argument("gamma: must be >= 0");
    std::vector<double> p(F);
    double sum = 0.0;
    for (int f = 1; f <= F; ++f) {
        p[f - 1] = std::pow(static_cast<double>(f), -gamma);
        sum += p[f - 1];
    }
    for (double& v : p) v /= sum;
    return p;
}

Demand sample_demand(RandomStream& rng, const std::vector<double>& pmf, int N) {
    const int F = static_cast<int>(pmf.size());
    std::vector<double> cdf(F);
    double acc = 0.0;
    for (int f = 0; f < F; ++f) {
        acc += pmf[f];
        cdf[f] = acc;
    }
    cdf[F - 1] = 1.0;

    Demand d;
    d.files.resize(N);
    for (int k = 0; k < N; ++k) {
        double u = rng.uniform01();
        int idx = static_cast<int>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        d.files[k] = idx + 1;
    }
    d.requested = d.files;
    std::sort(d.requested.begin(), d.requested.end());
    d.requested.erase(std::unique(d.requested.begin(), d.requested.end()), d.requested.end());
    return d;
}

ChannelRealization sample_channel(const StreamFactory& streams, const SystemConfig& cfg) {
    ChannelRealization ch;
    ch.N = cfg.N;
    ch.nR = cfg.nR;
    ch.nT = cfg.nT;
    ch.h.resize(size_t(cfg.N) * cfg.N);
    for (int k = 0; k < cfg.N; ++k) {
        for (int i = 0; i < cfg.N; ++i) {
            RandomStream rng = streams.unit(uint64_t(k) * cfg.N + i);
            double var = std::pow(cfg.alpha, std::abs(k - i));
            CMat& m = ch.h[size_t(k) * cfg.N + i];
            m.resize(cfg.nR, cfg.nT);
            for (int r = 0; r < cfg.nR; ++r)
                for (int c = 0; c < cfg.nT; ++c) m(r, c) = rng.cgauss(var);
        }
    }
    return ch;
}

}  // namespace fran
