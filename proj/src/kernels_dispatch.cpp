#include "fran/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace fran::kernels {

namespace detail {
const Table* avx2_compiled_table();
}

const Table* avx2_table() {
    const Table* t = detail::avx2_compiled_table();
    if (!t) return nullptr;
#if defined(__x86_64__)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return t;
#endif
    return nullptr;
}

namespace {

const Table* pick() {
    const char* env = std::getenv("FRAN_KERNELS");
    if (env && *env) {
        if (std::strcmp(env, "scalar") == 0) return &scalar_table();
        if (std::strcmp(env, "avx2") == 0) {
            const Table* t = avx2_table();
            if (!t) throw std::runtime_error("FRAN_KERNELS=avx2 but AVX2 is unavailable");
            return t;
        }
        throw std::runtime_error(std::string("unknown FRAN_KERNELS backend: ") + env);
    }
    if (const Table* t = avx2_table()) return t;
    return &scalar_table();
}

}  // namespace

const Table& active() {
    static const Table* t = pick();
    return *t;
}

const char* backend_name() { return active().name; }

}  // namespace fran::kernels
