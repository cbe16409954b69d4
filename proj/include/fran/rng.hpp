#pragma once

#include <cstdint>
#include <complex>
#include <utility>
#include <vector>

namespace fran {

// Counter-based random streams (Philox 4x64, 10 rounds).
//
// A stream is addressed by (key0, key1, ctr0, ctr1); the generator walks
// ctr2 as the block counter.  Streams with distinct addresses are
// statistically independent and may be consumed in any order, so a
// simulation can derive one stream per (seed, purpose, trial, unit)
// without coordination.

// One raw block: out[0..3] from counter ctr[0..3] and key[0..2).
void philox4x64_block(const uint64_t ctr[4], const uint64_t key[2], uint64_t out[4]);

class RandomStream {
public:
    RandomStream(uint64_t key0, uint64_t key1, uint64_t ctr0, uint64_t ctr1)
        : key_{key0, key1}, base_{ctr0, ctr1}, block_(0), pos_(4) {}

    uint64_t next_u64();

    // Uniform on [0, 1) with 53 random bits.
    double uniform01();

    // Uniform integer in [0, n), unbiased. n must be > 0.
    uint64_t below(uint64_t n);

    // Independent standard normal pair (Box-Muller).
    std::pair<double, double> gauss_pair();

    // Circularly-symmetric complex Gaussian with E|z|^2 = var.
    std::complex<double> cgauss(double var);

private:
    void refill();

    uint64_t key_[2];
    uint64_t base_[2];
    uint64_t block_;
    uint64_t buf_[4];
    int pos_;
};

// Stream purposes used by the simulation harness.
enum class StreamPurpose : uint64_t {
    Cache = 1,
    Demand = 2,
    Channel = 3,
};

// Stream for (master_seed, purpose, trial, unit).  `unit` subdivides a
// purpose further, e.g. one stream per (EN, file) pair during cache
// population so that draws for one unit never shift those of another.
inline RandomStream substream(uint64_t master_seed, StreamPurpose purpose,
                              uint64_t trial, uint64_t unit) {
    return RandomStream(master_seed, static_cast<uint64_t>(purpose), trial, unit);
}

}  // namespace fran
