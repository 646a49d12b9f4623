#include <algorithm>
#include <cmath>

#include "lmstab/kernels.hpp"

namespace lmstab::kernels {
namespace {

void scale_offset_clamp_scalar(const float* src, float* dst, std::size_t n, float gain,
                               float offset) {
    for (std::size_t i = 0; i < n; ++i) {
        float v = gain * src[i] + offset;
        dst[i] = std::min(1.0f, std::max(0.0f, v));
    }
}

void convolve_sym_scalar(const float* src, float* dst, std::size_t n, const float* taps,
                         int radius) {
    const std::ptrdiff_t sn = static_cast<std::ptrdiff_t>(n);
    for (std::ptrdiff_t i = 0; i < sn; ++i) {
        float acc = taps[0] * src[i];
        for (int k = 1; k <= radius; ++k) {
            const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - k);
            const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(sn - 1, i + k);
            acc += taps[k] * (src[lo] + src[hi]);
        }
        dst[i] = acc;
    }
}

void lk_accumulate_scalar(const float* ix, const float* iy, const float* it, std::size_t n,
                          double out[5]) {
    double sxx = 0, sxy = 0, syy = 0, sxt = 0, syt = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double gx = ix[i], gy = iy[i], dt = it[i];
        sxx += gx * gx;
        sxy += gx * gy;
        syy += gy * gy;
        sxt += gx * dt;
        syt += gy * dt;
    }
    out[0] += sxx;
    out[1] += sxy;
    out[2] += syy;
    out[3] += sxt;
    out[4] += syt;
}

double sum_abs_scalar(const float* a, std::size_t n) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += std::fabs(static_cast<double>(a[i]));
    return s;
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops{scale_offset_clamp_scalar, convolve_sym_scalar, lk_accumulate_scalar,
                         sum_abs_scalar};
    return ops;
}

}  // namespace lmstab::kernels
