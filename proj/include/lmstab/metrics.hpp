#pragma once

#include <string>
#include <vector>

#include "lmstab/geometry.hpp"

namespace lmstab {

// Per-axis stability numbers for one landmark, normalized by d.
struct AxisStats {
    double x = 0.0;
    double y = 0.0;
};

struct Histogram2D {
    int bins = 0;
    double range = 0.0;  // symmetric: edges span [-range, range] on both axes (px)
    std::vector<int> counts;  // bins * bins, row-major in (y, x)

    int& at(int bx, int by) { return counts[static_cast<std::size_t>(by) * bins + bx]; }
    int at(int bx, int by) const { return counts[static_cast<std::size_t>(by) * bins + bx]; }
};

struct LandmarkStats {
    AxisStats mean_diff;  // mean (pred - gt) / d
    AxisStats sdd;
    AxisStats std_dev;
    double sdd_euclid = 0.0;  // sqrt(sdd.x^2 + sdd.y^2)
    Histogram2D hist;         // 2D histogram of (dx, dy) in px
};

struct StabilityReport {
    std::vector<LandmarkStats> per_landmark;
    double d_used = 0.0;  // px
    int n_frames = 0;

    std::string to_csv() const;          // landmark,axis,mean_diff,sdd,std
    std::string to_json() const;
    std::string histogram_csv(std::size_t landmark) const;  // bins x bins matrix
};

// Normalized mean error of one frame; d is the gt's outer ocular distance.
double nme(const LandmarkSet& pred, const LandmarkSet& gt);

// Mean outer ocular distance over a track.
double mean_ocular_distance(const std::vector<LandmarkSet>& track);

// Per-landmark, per-axis sample standard deviation (n-1) across frames,
// normalized by d. Requires >= 2 frames.
std::vector<AxisStats> per_point_std(const std::vector<LandmarkSet>& track, double d);

// Per-landmark, per-axis standard deviation of (pred - gt) across frames,
// normalized by d. Invariant to constant bias.
std::vector<AxisStats> sdd(const std::vector<LandmarkSet>& track_pred,
                           const std::vector<LandmarkSet>& track_gt, double d);

// Full stability report with per-landmark 2D noise histograms.
StabilityReport noise_report(const std::vector<LandmarkSet>& track_pred,
                             const std::vector<LandmarkSet>& track_gt, int bins);

}  // namespace lmstab
