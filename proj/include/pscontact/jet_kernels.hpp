#pragma once

#include <cstddef>
#include <cstdint>

namespace pscontact::jetk {

// Data-parallel inner loops of jet arithmetic over dense derivative tables.
// Two implementations ship: a portable scalar reference and an AVX2 variant
// picked once at process start. The SIMD path must agree with the reference
// to tight floating-point tolerance (exactly for the elementwise ops); the
// equivalence suite in tests/ enforces this.
struct Kernels {
    const char* name;
    void (*add)(const double* a, const double* b, double* out, std::size_t n);
    void (*sub)(const double* a, const double* b, double* out, std::size_t n);
    void (*neg)(const double* a, double* out, std::size_t n);
    void (*scale)(const double* a, double s, double* out, std::size_t n);
    // out[d] = sum over rows k in [seg_begin[d], seg_begin[d+1]) of
    //          coeff[k] * a[left[k]] * b[right[k]];  out must not alias a/b.
    void (*leibniz)(const double* a, const double* b, double* out,
                    const std::int32_t* left, const std::int32_t* right,
                    const double* coeff, const std::int32_t* seg_begin,
                    std::size_t n_out);
};

const Kernels& scalar_kernels();

// AVX2+FMA variant; nullptr when the build target or the running CPU lacks it.
const Kernels* avx2_kernels();

// The implementation jet arithmetic actually uses, selected once.
const Kernels& active_kernels();

} // namespace pscontact::jetk
