#include "purity/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace purity::kernels {

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

const Ops& resolve() {
    const char* pref = std::getenv("PURITY_KERNELS");
    if (pref != nullptr) {
        if (std::strcmp(pref, "scalar") == 0) return scalar_ops();
        if (std::strcmp(pref, "avx2") == 0 && avx2_available()) return avx2_ops();
        // "auto" or anything unrecognized falls through to detection
    }
    return avx2_available() ? avx2_ops() : scalar_ops();
}

} // namespace

const Ops& ops() {
    static const Ops& active = resolve();
    return active;
}

} // namespace purity::kernels
