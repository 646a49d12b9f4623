#pragma once

#include <cstdint>
#include <vector>

#include "lmstab/geometry.hpp"

namespace lmstab {

// Row-major image with intensities in [0,1]. 1 (gray) or 3 (RGB) channels.
struct ImageBuffer {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<float> samples;  // width * height * channels

    ImageBuffer() = default;
    ImageBuffer(int w, int h, int c, float fill = 0.0f)
        : width(w), height(h), channels(c),
          samples(static_cast<std::size_t>(w) * h * c, fill) {}

    float& at(int x, int y, int c = 0) {
        return samples[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    float at(int x, int y, int c = 0) const {
        return samples[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    bool operator==(const ImageBuffer& o) const = default;
};

// Luminance conversion (0.299/0.587/0.114); gray images pass through unchanged.
ImageBuffer to_gray(const ImageBuffer& img);

// Bilinear sample of a single-channel image at a continuous position.
// Coordinates outside the valid sampling rectangle read as 0.
float bilinear_sample(const ImageBuffer& gray, double x, double y);

// Inverse-mapped bilinear warp; out-of-source pixels are 0. Output size equals
// input size.
ImageBuffer warp_image(const ImageBuffer& img, const Homography& H);

// Separable Gaussian blur with kernel radius ceil(3*sigma). sigma == 0 returns
// the input unchanged.
ImageBuffer gaussian_blur(const ImageBuffer& img, double sigma);

// Line-kernel motion blur of a given length (px) and angle (radians).
// length < 1 returns the input unchanged.
ImageBuffer motion_blur(const ImageBuffer& img, double length, double angle);

// clamp(gain * v + offset, 0, 1) on every sample.
ImageBuffer adjust_brightness(const ImageBuffer& img, double gain, double offset);

}  // namespace lmstab
