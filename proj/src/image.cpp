#include "lmstab/image.hpp"

#include <algorithm>
#include <cmath>

#include "lmstab/kernels.hpp"

namespace lmstab {

ImageBuffer to_gray(const ImageBuffer& img) {
    if (img.channels == 1) return img;
    if (img.channels != 3) throw DataError("to_gray expects 1 or 3 channels");
    ImageBuffer out(img.width, img.height, 1);
    const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
    for (std::size_t i = 0; i < n; ++i) {
        const float* p = &img.samples[i * 3];
        out.samples[i] = 0.299f * p[0] + 0.587f * p[1] + 0.114f * p[2];
    }
    return out;
}

namespace {

// Zero-padded bilinear read of one channel.
float sample_channel(const ImageBuffer& img, double x, double y, int c) {
    const int x0 = static_cast<int>(std::floor(x));
    const int y0 = static_cast<int>(std::floor(y));
    const double fx = x - x0;
    const double fy = y - y0;
    double acc = 0.0;
    for (int dy = 0; dy <= 1; ++dy)
        for (int dx = 0; dx <= 1; ++dx) {
            const int xi = x0 + dx;
            const int yi = y0 + dy;
            if (xi < 0 || yi < 0 || xi >= img.width || yi >= img.height) continue;
            const double w = (dx ? fx : 1.0 - fx) * (dy ? fy : 1.0 - fy);
            acc += w * img.at(xi, yi, c);
        }
    return static_cast<float>(acc);
}

}  // namespace

float bilinear_sample(const ImageBuffer& gray, double x, double y) {
    return sample_channel(gray, x, y, 0);
}

ImageBuffer warp_image(const ImageBuffer& img, const Homography& H) {
    const Homography inv = H.inverse();
    ImageBuffer out(img.width, img.height, img.channels);
    for (int y = 0; y < out.height; ++y)
        for (int x = 0; x < out.width; ++x) {
            const double w = inv.m[6] * x + inv.m[7] * y + inv.m[8];
            if (std::abs(w) <= 1e-12) continue;  // maps to infinity: leave fill value
            const double sx = (inv.m[0] * x + inv.m[1] * y + inv.m[2]) / w;
            const double sy = (inv.m[3] * x + inv.m[4] * y + inv.m[5]) / w;
            for (int c = 0; c < img.channels; ++c) out.at(x, y, c) = sample_channel(img, sx, sy, c);
        }
    return out;
}

namespace {

std::vector<float> gaussian_taps(double sigma, int& radius) {
    radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<float> taps(radius + 1);
    double norm = 0.0;
    for (int k = -radius; k <= radius; ++k) norm += std::exp(-0.5 * k * k / (sigma * sigma));
    for (int k = 0; k <= radius; ++k)
        taps[k] = static_cast<float>(std::exp(-0.5 * k * k / (sigma * sigma)) / norm);
    return taps;
}

std::vector<float> extract_plane(const ImageBuffer& img, int c) {
    std::vector<float> plane(static_cast<std::size_t>(img.width) * img.height);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) plane[static_cast<std::size_t>(y) * img.width + x] = img.at(x, y, c);
    return plane;
}

void insert_plane(ImageBuffer& img, const std::vector<float>& plane, int c) {
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) img.at(x, y, c) = plane[static_cast<std::size_t>(y) * img.width + x];
}

void transpose(const std::vector<float>& src, std::vector<float>& dst, int w, int h) {
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            dst[static_cast<std::size_t>(x) * h + y] = src[static_cast<std::size_t>(y) * w + x];
}

// Horizontal symmetric convolution on every row of a plane.
void convolve_rows(std::vector<float>& plane, int w, int h, const float* taps, int radius) {
    std::vector<float> row(w);
    const auto& k = kernels::ops();
    for (int y = 0; y < h; ++y) {
        float* r = &plane[static_cast<std::size_t>(y) * w];
        k.convolve_sym(r, row.data(), static_cast<std::size_t>(w), taps, radius);
        std::copy(row.begin(), row.end(), r);
    }
}

}  // namespace

ImageBuffer gaussian_blur(const ImageBuffer& img, double sigma) {
    if (sigma <= 0.0) return img;
    int radius = 0;
    const auto taps = gaussian_taps(sigma, radius);
    ImageBuffer out = img;
    std::vector<float> t(static_cast<std::size_t>(img.width) * img.height);
    for (int c = 0; c < img.channels; ++c) {
        auto plane = extract_plane(img, c);
        convolve_rows(plane, img.width, img.height, taps.data(), radius);
        transpose(plane, t, img.width, img.height);
        convolve_rows(t, img.height, img.width, taps.data(), radius);
        transpose(t, plane, img.height, img.width);
        insert_plane(out, plane, c);
    }
    return out;
}

ImageBuffer motion_blur(const ImageBuffer& img, double length, double angle) {
    if (length < 1.0) return img;
    const int taps = std::max(2, static_cast<int>(std::round(length)));
    const double dx = std::cos(angle);
    const double dy = std::sin(angle);
    ImageBuffer out(img.width, img.height, img.channels);
    const double half = (taps - 1) / 2.0;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < img.channels; ++c) {
                double acc = 0.0;
                for (int t = 0; t < taps; ++t) {
                    const double o = t - half;
                    acc += sample_channel(img, x + o * dx, y + o * dy, c);
                }
                out.at(x, y, c) = static_cast<float>(acc / taps);
            }
    return out;
}

ImageBuffer adjust_brightness(const ImageBuffer& img, double gain, double offset) {
    if (gain <= 0.0) throw DataError("brightness gain must be positive");
    ImageBuffer out(img.width, img.height, img.channels);
    kernels::ops().scale_offset_clamp(img.samples.data(), out.samples.data(), img.samples.size(),
                                      static_cast<float>(gain), static_cast<float>(offset));
    return out;
}

}  // namespace lmstab
