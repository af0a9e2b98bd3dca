#include "dw/simd/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace dw::simd {

#if defined(DW_BUILD_AVX2)
namespace avx2 {
const KernelTable& table();
}
#endif

const KernelTable* avx2_kernels() {
#if defined(DW_BUILD_AVX2)
    static const bool supported = __builtin_cpu_supports("avx2");
    return supported ? &avx2::table() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active_kernels() {
    static const KernelTable& selected = [&]() -> const KernelTable& {
        if (const char* env = std::getenv("DW_SIMD"); env && std::string_view(env) == "scalar")
            return scalar_kernels();
        if (const KernelTable* t = avx2_kernels()) return *t;
        return scalar_kernels();
    }();
    return selected;
}

} // namespace dw::simd
