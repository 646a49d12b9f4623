#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lmstab/fusion.hpp"
#include "lmstab/noise.hpp"

namespace lmstab {

// Synthetic noisy detector: ground truth plus configured noise, standing in
// for a CNN so the noise-effect experiments run without any training.
struct DetectorSpec {
    NoiseSpec noise;
    std::optional<std::vector<Point2>> bias;  // per-landmark constant offset (px)
    double rho = 0.0;                         // AR(1) temporal correlation in [0,1)

    void validate() const;
};

// Per frame: detection = gt + bias + jitter with
// jitter_j = rho * jitter_{j-1} + sqrt(1 - rho^2) * eps_j, eps_j per the noise
// spec. rho = 0 gives iid noise; the sqrt factor keeps the marginal std at the
// spec's sigma for any rho.
std::vector<LandmarkSet> simulate_detections(const std::vector<LandmarkSet>& gt_track,
                                             const DetectorSpec& spec);

struct SweepCell {
    double sigma = 0.0;
    std::uint64_t seed = 0;
    double nme_raw = 0.0;
    double nme_fused = 0.0;
    double mean_sdd_raw = 0.0;
    double mean_sdd_fused = 0.0;
    std::vector<double> sdd_raw_per_landmark;    // euclidean SDD per landmark
    std::vector<double> sdd_fused_per_landmark;
};

struct SweepReport {
    std::vector<SweepCell> cells;  // sorted by (sigma, seed)

    // Columns: sigma, seed, nme_raw, nme_fused, mean_sdd_raw, mean_sdd_fused.
    std::string to_csv() const;
    std::string cell_csv(const SweepCell& cell) const;  // landmark,sdd_raw,sdd_fused
};

// Gaussian noise-injection sweep over a sequence carrying a gt track: for
// every (sigma, seed) cell, simulate detections, stabilize, and compare
// NME/SDD of raw vs fused tracks.
SweepReport run_noise_sweep(const FrameSequence& seq, const std::string& gt_track_label,
                            const std::vector<double>& sigmas, const FusionParams& params,
                            const std::vector<std::uint64_t>& seeds);

}  // namespace lmstab
