#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fran/model.hpp"

namespace fran {

// Which subfiles each EN holds after pre-fetching. Bit (f,l) of EN i is
// set iff subfile l of file f sits in EN i's cache. Immutable once built.
class CacheState {
public:
    CacheState(int N, int F, int L, double subfile_bits);

    int num_ens() const { return n_; }
    int num_files() const { return f_; }
    int subfiles_per_file() const { return l_; }
    double subfile_bits() const { return subfile_bits_; }

    // 1-based indices; throws std::invalid_argument when out of range.
    bool cached(int en, int file, int sub) const;

    // 0-based, unchecked hot-path accessor.
    bool cached0(int en, int file, int sub) const {
        size_t bit = size_t(file) * l_ + sub;
        return (words_[size_t(en) * words_per_en_ + bit / 64] >> (bit % 64)) & 1u;
    }

    void set0(int en, int file, int sub);

    // One '0'/'1' row per (EN, file), EN-major.
    std::string dump() const;
    static CacheState from_dump(int N, int F, int L, double subfile_bits,
                                const std::string& text);

private:
    int n_, f_, l_;
    double subfile_bits_;
    size_t words_per_en_;
    std::vector<uint64_t> words_;
};

// Randomized fractional placement: per (EN, file), a uniformly random
// floor(mu*L)-subset of the L subfiles, independent across pairs.
CacheState populate_caches(const StreamFactory& streams, const SystemConfig& cfg);

}  // namespace fran
