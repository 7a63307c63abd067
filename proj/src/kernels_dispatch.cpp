#include "qa/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace qa::kernels {

#if defined(QA_HAVE_AVX2_KERNELS)
const KernelTable& avx2_table_unchecked();
#endif

const KernelTable* avx2_table() {
#if defined(QA_HAVE_AVX2_KERNELS)
    static const bool supported = [] {
        __builtin_cpu_init();
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    }();
    return supported ? &avx2_table_unchecked() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active() {
    static const KernelTable& table = []() -> const KernelTable& {
        const char* env = std::getenv("QA_SIMD");
        const std::string choice = env ? env : "auto";
        if (choice == "scalar") {
            return scalar_table();
        }
        const KernelTable* simd = avx2_table();
        if (choice == "avx2" && simd == nullptr) {
            throw std::runtime_error("QA_SIMD=avx2 requested but AVX2/FMA is unavailable");
        }
        return simd ? *simd : scalar_table();
    }();
    return table;
}

}  // namespace qa::kernels
