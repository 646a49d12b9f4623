#pragma once

#include <string>
#include <vector>

#include "lmstab/optical_flow.hpp"
#include "lmstab/sequence.hpp"

namespace lmstab {

// Trust-weighting configuration for detection/tracking blending.
struct FusionParams {
    double tau_dt = 5.0;  // px scale for detection-tracking distance
    double tau_fb = 5.0;  // px scale for forward-backward error
    FlowParams flow;
    // When set (default), taus are scaled by d/100 so the trust scale follows
    // face size (tau 5.0 -> 0.05*d).
    bool normalize_by_d = true;
    // Ablation: seed each frame's tracking from the raw detections of the
    // previous frame instead of the fused output.
    bool seed_from_detections = false;
};

struct FusedTrack {
    std::vector<LandmarkSet> landmarks;            // per frame
    std::vector<std::vector<double>> alphas;       // per frame, per landmark, in [0,1]
    std::vector<std::vector<double>> d_dt;         // detection-tracking distance (px)
    std::vector<std::vector<double>> d_fb;         // forward-backward error (px)

    // Per-frame pts blocks plus a CSV of (frame, landmark, alpha, d_dt, d_fb).
    std::string diagnostics_csv() const;
};

// alpha = 1 - exp(-(d_dt/tau_dt + d_fb/tau_fb)); 0 at (0,0), exactly 1 when
// d_fb is +inf (lost track falls back to detection).
double alpha_weight(double d_dt, double d_fb, double tau_dt, double tau_fb);

// Per-landmark convex blend: out_i = alpha_i * det_i + (1 - alpha_i) * trk_i.
// alpha_i == 1 reproduces the detection bitwise. d scales the taus when
// normalize_by_d is set (pass the face's outer ocular distance).
std::pair<LandmarkSet, std::vector<double>> fuse_frame(const LandmarkSet& detection,
                                                       const LandmarkSet& tracking,
                                                       const std::vector<double>& fb_error,
                                                       const FusionParams& params, double d);

// Full-sequence stabilization: frame 1 passes the detection through; each
// later frame tracks the previous fused landmarks forward, measures the
// forward-backward error, and blends with that frame's detection.
FusedTrack stabilize_sequence(const FrameSequence& seq, const std::string& detection_track_label,
                              const FusionParams& params);

// Dataset correction: the (noisy) annotation track plays the detection role.
FusedTrack correct_dataset(const FrameSequence& seq, const std::string& gt_track_label,
                           const FusionParams& params);

}  // namespace lmstab
