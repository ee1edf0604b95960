#include "parlab/simd.hpp"

#include <cstdlib>
#include <cstring>

namespace parlab::simd {

namespace {

const KernelOps* pick() {
    const char* want = std::getenv("PARLAB_SIMD");
#if defined(PARLAB_BUILD_AVX2)
    bool cpu_ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    if (want != nullptr) {
        if (std::strcmp(want, "scalar") == 0) return &scalar_ops;
        if (std::strcmp(want, "avx2") == 0 && cpu_ok) return &avx2_ops;
        // "auto" or anything unrecognized falls through to detection
    }
    if (cpu_ok) return &avx2_ops;
#else
    (void)want;
#endif
    return &scalar_ops;
}

}  // namespace

const KernelOps& active() {
    static const KernelOps* ops = pick();
    return *ops;
}

std::string active_name() { return active().name; }

}  // namespace parlab::simd
