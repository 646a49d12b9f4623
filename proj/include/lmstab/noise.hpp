#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lmstab/geometry.hpp"

namespace lmstab {

enum class NoiseKind { gaussian, poisson, bernoulli, salt_pepper, random_impulse };

// One coordinate-noise process. Length-scale parameters (sigma, amplitude) are
// fractions of the face's outer ocular distance d; scale and the impulse range
// are in pixels.
struct NoiseSpec {
    NoiseKind kind = NoiseKind::gaussian;
    double sigma = 0.0;      // gaussian
    double lambda = 0.0;     // poisson: event rate
    double scale = 0.0;      // poisson: px per event
    double p = 0.0;          // bernoulli / salt_pepper / random_impulse
    double amplitude = 0.0;  // salt_pepper
    struct Range {
        double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
    } range;                 // random_impulse bounding box (px)
    std::uint64_t seed = 0;

    void validate() const;
    std::string to_json() const;
    static NoiseSpec from_json(const std::string& text);
};

struct NoisySample {
    LandmarkSet points;
    std::vector<bool> mask;  // false = point dropped (Bernoulli)
};

// Noise injection, deterministic given spec.seed. d <= 0 derives the
// normalizer from the landmarks (requires the 68-point layout); pass d
// explicitly for other layouts.
NoisySample inject(const LandmarkSet& lms, const NoiseSpec& spec, double d = 0.0);

// Same process driven by a caller-owned RNG (used for multi-frame simulation).
NoisySample inject(const LandmarkSet& lms, const NoiseSpec& spec, double d, std::mt19937_64& rng);

// Location estimators over repeated noisy samples of one point. Masked
// (invalid) samples are excluded; zero valid samples is an error.
Point2 estimator_mean(const std::vector<NoisySample>& samples, std::size_t point_index);
Point2 estimator_median(const std::vector<NoisySample>& samples, std::size_t point_index);
// Center of the densest 2D bin; ties resolved toward the smallest bin index.
Point2 estimator_mode(const std::vector<NoisySample>& samples, std::size_t point_index,
                      double bin_width);

struct ZeroMeanVerdict {
    Point2 mean;
    Point2 std_error;
    bool is_zero_mean_at_3sigma = false;
};

// Tests whether a difference sample is consistent with zero-mean noise:
// true iff |mean| <= 3 * stderr on both axes.
ZeroMeanVerdict zero_mean_test(const std::vector<Point2>& diffs);

}  // namespace lmstab
