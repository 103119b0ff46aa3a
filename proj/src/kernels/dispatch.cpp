#include "qfridge/kernels.hpp"

#include <cstdlib>
#include <iostream>
#include <string_view>

namespace qfridge::kernels {

#if defined(QFRIDGE_HAVE_AVX2)
namespace detail {
const KernelTable& avx2_table_unchecked() noexcept;
}
#endif

namespace {

bool cpu_has_avx2() noexcept {
#if defined(QFRIDGE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable& select() noexcept {
    const KernelTable* simd = avx2_table();
    const char* env = std::getenv("QFRIDGE_SIMD");
    const std::string_view want = env ? env : "auto";
    if (want == "scalar") return scalar_table();
    if (want == "avx2") {
        if (simd) return *simd;
        std::cerr << "qfridge: QFRIDGE_SIMD=avx2 requested but unavailable; using scalar\n";
        return scalar_table();
    }
    if (want != "auto") {
        std::cerr << "qfridge: unknown QFRIDGE_SIMD value '" << want << "'; using auto\n";
    }
    return simd ? *simd : scalar_table();
}

}  // namespace

const KernelTable* avx2_table() noexcept {
#if defined(QFRIDGE_HAVE_AVX2)
    static const bool ok = cpu_has_avx2();
    return ok ? &detail::avx2_table_unchecked() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active() noexcept {
    static const KernelTable& table = select();
    return table;
}

}  // namespace qfridge::kernels
