// AVX2+FMA variants of the jet table kernels. This translation unit is only
// compiled on x86-64 builds and is guarded at runtime by cpu feature checks
// in kernels_dispatch.cpp, so plain intrinsics are safe here.

#include "pscontact/jet_kernels.hpp"

#if defined(PSC_HAVE_AVX2_BUILD)

#include <immintrin.h>

namespace pscontact::jetk {

namespace {

void add_avx2(const double* a, const double* b, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    }
    for (; i < n; ++i) out[i] = a[i] + b[i];
}

void sub_avx2(const double* a, const double* b, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    }
    for (; i < n; ++i) out[i] = a[i] - b[i];
}

void neg_avx2(const double* a, double* out, std::size_t n) {
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i, _mm256_sub_pd(zero, _mm256_loadu_pd(a + i)));
    }
    for (; i < n; ++i) out[i] = -a[i];
}

void scale_avx2(const double* a, double s, double* out, std::size_t n) {
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), vs));
    }
    for (; i < n; ++i) out[i] = a[i] * s;
}

void leibniz_avx2(const double* a, const double* b, double* out,
                  const std::int32_t* left, const std::int32_t* right,
                  const double* coeff, const std::int32_t* seg_begin,
                  std::size_t n_out) {
    for (std::size_t d = 0; d < n_out; ++d) {
        const std::int32_t end = seg_begin[d + 1];
        std::int32_t k = seg_begin[d];
        __m256d acc = _mm256_setzero_pd();
        for (; k + 4 <= end; k += 4) {
            const __m128i il = _mm_loadu_si128(reinterpret_cast<const __m128i*>(left + k));
            const __m128i ir = _mm_loadu_si128(reinterpret_cast<const __m128i*>(right + k));
            const __m256d va = _mm256_i32gather_pd(a, il, 8);
            const __m256d vb = _mm256_i32gather_pd(b, ir, 8);
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(coeff + k), _mm256_mul_pd(va, vb), acc);
        }
        const __m128d lo = _mm256_castpd256_pd128(acc);
        const __m128d hi = _mm256_extractf128_pd(acc, 1);
        const __m128d pair = _mm_add_pd(lo, hi);
        double sum = _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
        for (; k < end; ++k) sum += coeff[k] * a[left[k]] * b[right[k]];
        out[d] = sum;
    }
}

} // namespace

const Kernels* avx2_table() {
    static const Kernels k = {
        "avx2", add_avx2, sub_avx2, neg_avx2, scale_avx2, leibniz_avx2,
    };
    return &k;
}

} // namespace pscontact::jetk

#endif // PSC_HAVE_AVX2_BUILD
