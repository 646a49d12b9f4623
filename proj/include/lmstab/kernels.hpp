#pragma once

#include <cstddef>

namespace lmstab::kernels {

// Data-parallel inner loops shared by the image pipeline and the flow solver.
// A scalar reference implementation always exists; wider variants are picked
// at runtime by CPU capability. All variants must agree with the scalar
// reference within normal floating-point reassociation tolerance.
struct Ops {
    // dst[i] = clamp(gain * src[i] + offset, 0, 1)
    void (*scale_offset_clamp)(const float* src, float* dst, std::size_t n, float gain,
                               float offset);
    // Symmetric 1D convolution: dst[i] = sum_{k=-r..r} taps[|k|] * src[clamp(i+k)].
    // taps has radius+1 entries (center first). Borders clamp to the edge sample.
    void (*convolve_sym)(const float* src, float* dst, std::size_t n, const float* taps,
                         int radius);
    // Structure-tensor / mismatch accumulation for one tracking window:
    // out[0..4] += {ix*ix, ix*iy, iy*iy, ix*it, iy*it} summed over n samples.
    void (*lk_accumulate)(const float* ix, const float* iy, const float* it, std::size_t n,
                          double out[5]);
    // Sum of absolute values.
    double (*sum_abs)(const float* a, std::size_t n);
};

// Runtime-selected implementation (AVX2 when available, else scalar).
const Ops& ops();
// Always the scalar reference.
const Ops& scalar_ops();
// AVX2 implementation, or nullptr when unsupported on this machine/build.
const Ops* avx2_ops();
// Name of the active variant ("scalar", "avx2").
const char* active_name();

}  // namespace lmstab::kernels
