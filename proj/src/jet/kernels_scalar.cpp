#include "pscontact/jet_kernels.hpp"

namespace pscontact::jetk {

namespace {

void add_scalar(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

void sub_scalar(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

void neg_scalar(const double* a, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = -a[i];
}

void scale_scalar(const double* a, double s, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * s;
}

void leibniz_scalar(const double* a, const double* b, double* out,
                    const std::int32_t* left, const std::int32_t* right,
                    const double* coeff, const std::int32_t* seg_begin,
                    std::size_t n_out) {
    for (std::size_t d = 0; d < n_out; ++d) {
        double acc = 0.0;
        for (std::int32_t k = seg_begin[d]; k < seg_begin[d + 1]; ++k) {
            acc += coeff[k] * a[left[k]] * b[right[k]];
        }
        out[d] = acc;
    }
}

} // namespace

const Kernels& scalar_kernels() {
    static const Kernels k = {
        "scalar", add_scalar, sub_scalar, neg_scalar, scale_scalar, leibniz_scalar,
    };
    return k;
}

} // namespace pscontact::jetk
