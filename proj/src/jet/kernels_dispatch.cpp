#include "pscontact/jet_kernels.hpp"

namespace pscontact::jetk {

#if defined(PSC_HAVE_AVX2_BUILD)
const Kernels* avx2_table();
#endif

const Kernels* avx2_kernels() {
#if defined(PSC_HAVE_AVX2_BUILD)
    static const Kernels* selected = []() -> const Kernels* {
        if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
            return avx2_table();
        }
        return nullptr;
    }();
    return selected;
#else
    return nullptr;
#endif
}

const Kernels& active_kernels() {
    static const Kernels& selected = [&]() -> const Kernels& {
        if (const Kernels* simd = avx2_kernels()) return *simd;
        return scalar_kernels();
    }();
    return selected;
}

} // namespace pscontact::jetk
