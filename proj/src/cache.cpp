#include "fran/cache.hpp"

#include <numeric>
#include <stdexcept>

namespace fran {

CacheState::CacheState(int N, int F, int L, double subfile_bits)
    : n_(N), f_(F), l_(L), subfile_bits_(subfile_bits) {
    words_per_en_ = (size_t(F) * L + 63) / 64;
    words_.assign(size_t(N) * words_per_en_, 0);
}

bool CacheState::cached(int en, int file, int sub) const {
    if (en < 1 || en > n_) throw std::invalid_argument("en: index out of range");
    if (file < 1 || file > f_) throw std::invalid_argument("file: index out of range");
    if (sub < 1 || sub > l_) throw std::invalid_argument("sub: index out of range");
    return cached0(en - 1, file - 1, sub - 1);
}

void CacheState::set0(int en, int file, int sub) {
    size_t bit = size_t(file) * l_ + sub;
    words_[size_t(en) * words_per_en_ + bit / 64] |= uint64_t(1) << (bit % 64);
}

std::string CacheState::dump() const {
    std::string out;
    out.reserve(size_t(n_) * f_ * (l_ + 1));
    for (int i = 0; i < n_; ++i) {
        for (int f = 0; f < f_; ++f) {
            for (int l = 0; l < l_; ++l) out.push_back(cached0(i, f, l) ? '1' : '0');
            out.push_back('\n');
        }
    }
    return out;
}

CacheState CacheState::from_dump(int N, int F, int L, double subfile_bits,
                                 const std::string& text) {
    CacheState st(N, F, L, subfile_bits);
    int i = 0, f = 0, l = 0;
    for (char c : text) {
        if (c == '\n') {
            if (l != L) throw std::invalid_argument("cache dump: short row");
            l = 0;
            if (++f == F) {
                f = 0;
                ++i;
            }
            continue;
        }
        if (c != '0' && c != '1') throw std::invalid_argument("cache dump: bad character");
        if (i >= N || l >= L) throw std::invalid_argument("cache dump: too much data");
        if (c == '1') st.set0(i, f, l);
        ++l;
    }
    if (i != N || f != 0 || l != 0) throw std::invalid_argument("cache dump: truncated");
    return st;
}

CacheState populate_caches(const StreamFactory& streams, const SystemConfig& cfg) {
    CacheState st(cfg.N, cfg.F, cfg.L, cfg.subfile_bits());
    const int keep = cfg.cached_per_file();
    if (keep == 0) return st;

    std::vector<int> perm(cfg.L);
    for (int i = 0; i < cfg.N; ++i) {
        for (int f = 0; f < cfg.F; ++f) {
            RandomStream rng = streams.unit(uint64_t(i) * cfg.F + f);
            std::iota(perm.begin(), perm.end(), 0);
            // partial Fisher-Yates; the first `keep` slots are the subset
            for (int j = 0; j < keep; ++j) {
                int swap_at = j + static_cast<int>(rng.below(uint64_t(cfg.L - j)));
                std::swap(perm[j], perm[swap_at]);
                st.set0(i, f, perm[j]);
            }
        }
    }
    return st;
}

}  // namespace fran
