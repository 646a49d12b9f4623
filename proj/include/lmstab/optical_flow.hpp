#pragma once

#include <vector>

#include "lmstab/image.hpp"

namespace lmstab {

// Pyramidal iterative Lucas-Kanade configuration.
struct FlowParams {
    int window = 10;          // half-size in px; window is (2w+1)^2 samples
    int pyramid_levels = 3;
    int max_iters = 30;
    double epsilon = 0.01;    // px; stop when the increment is smaller
    double min_eigen = 1e-4;  // per-pixel structure-tensor threshold on [0,1] intensities
};

enum class TrackStatus { ok, lost };

struct TrackResult {
    std::vector<Point2> points;
    std::vector<TrackStatus> status;
    std::vector<double> residual;  // mean |dI| over the window at convergence
};

struct ForwardBackwardResult {
    TrackResult forward;
    std::vector<Point2> back_points;
    std::vector<double> fb_error;  // px; +inf for lost points
};

// Level 0 = input (converted to gray); level k+1 = 5-tap Gaussian blur then
// 2x decimation. Fails when a level would fall under 8x8.
std::vector<ImageBuffer> build_pyramid(const ImageBuffer& img, int levels);

// Sparse coarse-to-fine point tracking prev -> next.
TrackResult track_points(const ImageBuffer& prev, const ImageBuffer& next,
                         const std::vector<Point2>& pts, const FlowParams& params);

// Tracks prev -> next, then the results next -> prev; fb_error is the
// round-trip distance, the fusion trust signal.
ForwardBackwardResult forward_backward(const ImageBuffer& prev, const ImageBuffer& next,
                                       const std::vector<Point2>& pts, const FlowParams& params);

}  // namespace lmstab
