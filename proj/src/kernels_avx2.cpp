// AVX2 variants of the inner loops. Compiled with -mavx2 -mfma; only reached
// through the runtime dispatcher on CPUs that report AVX2.

#include "lmstab/kernels.hpp"

#if defined(__AVX2__) && (defined(__x86_64__) || defined(_M_X64))

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace lmstab::kernels {
namespace {

void scale_offset_clamp_avx2(const float* src, float* dst, std::size_t n, float gain,
                             float offset) {
    const __m256 vg = _mm256_set1_ps(gain);
    const __m256 vo = _mm256_set1_ps(offset);
    const __m256 zero = _mm256_setzero_ps();
    const __m256 one = _mm256_set1_ps(1.0f);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256 v = _mm256_fmadd_ps(vg, _mm256_loadu_ps(src + i), vo);
        v = _mm256_min_ps(one, _mm256_max_ps(zero, v));
        _mm256_storeu_ps(dst + i, v);
    }
    for (; i < n; ++i) {
        float v = gain * src[i] + offset;
        dst[i] = std::min(1.0f, std::max(0.0f, v));
    }
}

void convolve_sym_avx2(const float* src, float* dst, std::size_t n, const float* taps,
                       int radius) {
    const std::ptrdiff_t sn = static_cast<std::ptrdiff_t>(n);
    auto scalar_at = [&](std::ptrdiff_t i) {
        float acc = taps[0] * src[i];
        for (int k = 1; k <= radius; ++k) {
            const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - k);
            const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(sn - 1, i + k);
            acc += taps[k] * (src[lo] + src[hi]);
        }
        return acc;
    };
    const std::ptrdiff_t lo_end = std::min<std::ptrdiff_t>(radius, sn);
    for (std::ptrdiff_t i = 0; i < lo_end; ++i) dst[i] = scalar_at(i);
    std::ptrdiff_t i = lo_end;
    const std::ptrdiff_t hi_start = std::max<std::ptrdiff_t>(lo_end, sn - radius);
    for (; i + 8 <= hi_start; i += 8) {
        __m256 acc = _mm256_mul_ps(_mm256_set1_ps(taps[0]), _mm256_loadu_ps(src + i));
        for (int k = 1; k <= radius; ++k) {
            const __m256 pair =
                _mm256_add_ps(_mm256_loadu_ps(src + i - k), _mm256_loadu_ps(src + i + k));
            acc = _mm256_fmadd_ps(_mm256_set1_ps(taps[k]), pair, acc);
        }
        _mm256_storeu_ps(dst + i, acc);
    }
    for (; i < sn; ++i) dst[i] = scalar_at(i);
}

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

void lk_accumulate_avx2(const float* ix, const float* iy, const float* it, std::size_t n,
                        double out[5]) {
    __m256d sxx = _mm256_setzero_pd(), sxy = _mm256_setzero_pd(), syy = _mm256_setzero_pd();
    __m256d sxt = _mm256_setzero_pd(), syt = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d gx = _mm256_cvtps_pd(_mm_loadu_ps(ix + i));
        const __m256d gy = _mm256_cvtps_pd(_mm_loadu_ps(iy + i));
        const __m256d dt = _mm256_cvtps_pd(_mm_loadu_ps(it + i));
        sxx = _mm256_fmadd_pd(gx, gx, sxx);
        sxy = _mm256_fmadd_pd(gx, gy, sxy);
        syy = _mm256_fmadd_pd(gy, gy, syy);
        sxt = _mm256_fmadd_pd(gx, dt, sxt);
        syt = _mm256_fmadd_pd(gy, dt, syt);
    }
    double txx = hsum(sxx), txy = hsum(sxy), tyy = hsum(syy), txt = hsum(sxt), tyt = hsum(syt);
    for (; i < n; ++i) {
        const double gx = ix[i], gy = iy[i], dt = it[i];
        txx += gx * gx;
        txy += gx * gy;
        tyy += gy * gy;
        txt += gx * dt;
        tyt += gy * dt;
    }
    out[0] += txx;
    out[1] += txy;
    out[2] += tyy;
    out[3] += txt;
    out[4] += tyt;
}

double sum_abs_avx2(const float* a, std::size_t n) {
    const __m256 mask = _mm256_castsi256_ps(_mm256_set1_epi32(0x7fffffff));
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 v = _mm256_and_ps(mask, _mm256_loadu_ps(a + i));
        acc = _mm256_add_pd(acc, _mm256_cvtps_pd(_mm256_castps256_ps128(v)));
        acc = _mm256_add_pd(acc, _mm256_cvtps_pd(_mm256_extractf128_ps(v, 1)));
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += std::fabs(static_cast<double>(a[i]));
    return s;
}

}  // namespace

const Ops* avx2_ops_impl() {
    static const Ops ops{scale_offset_clamp_avx2, convolve_sym_avx2, lk_accumulate_avx2,
                         sum_abs_avx2};
    return &ops;
}

}  // namespace lmstab::kernels

#else

namespace lmstab::kernels {
const Ops* avx2_ops_impl() { return nullptr; }
}  // namespace lmstab::kernels

#endif
