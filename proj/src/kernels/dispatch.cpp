#include <cstdlib>
#include <string>

#include "tflab/kernels.hpp"

namespace tflab::kernels {

#ifndef TFLAB_HAVE_AVX2
const Table* avx2_table() { return nullptr; }
#endif

namespace {

bool force_scalar() {
    const char* env = std::getenv("TFLAB_FORCE_SCALAR");
    return env && std::string(env) != "0" && std::string(env) != "";
}

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

}  // namespace

const Table& active() {
    static const Table* chosen = [] {
        const Table* simd = avx2_table();
        if (simd && !force_scalar() && cpu_has_avx2()) return simd;
        return &scalar_table();
    }();
    return *chosen;
}

}  // namespace tflab::kernels
