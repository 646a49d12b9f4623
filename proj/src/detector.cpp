#include "lmstab/detector.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "lmstab/metrics.hpp"

namespace lmstab {

void DetectorSpec::validate() const {
    noise.validate();
    if (rho < 0.0 || rho >= 1.0) throw DataError("detector spec: rho must be in [0,1)");
}

std::vector<LandmarkSet> simulate_detections(const std::vector<LandmarkSet>& gt_track,
                                             const DetectorSpec& spec) {
    if (gt_track.empty()) throw DataError("simulate_detections: empty gt track");
    spec.validate();
    const std::size_t n_lm = gt_track[0].size();
    if (spec.bias && spec.bias->size() != n_lm)
        throw DataError("simulate_detections: bias length mismatch");

    std::mt19937_64 rng(spec.noise.seed);
    const double decay = spec.rho;
    const double scale = std::sqrt(1.0 - decay * decay);

    std::vector<LandmarkSet> out;
    out.reserve(gt_track.size());
    std::vector<Point2> jitter(n_lm, {0, 0});
    for (std::size_t j = 0; j < gt_track.size(); ++j) {
        const LandmarkSet& gt = gt_track[j];
        if (gt.size() != n_lm) throw DataError("simulate_detections: inconsistent gt track");

        // Per-frame noise offsets from the injector (mask drops are ignored:
        // a detector always outputs a point).
        const NoisySample sample = inject(gt, spec.noise, 0.0, rng);
        LandmarkSet det = gt;
        for (std::size_t i = 0; i < n_lm; ++i) {
            const Point2 eps = sample.points[i] - gt[i];
            if (j == 0)
                jitter[i] = eps;  // stationary start
            else
                jitter[i] = jitter[i] * decay + eps * scale;
            det[i] = gt[i] + jitter[i];
            if (spec.bias) det[i] = det[i] + (*spec.bias)[i];
        }
        out.push_back(std::move(det));
    }
    return out;
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

double track_nme(const std::vector<LandmarkSet>& pred, const std::vector<LandmarkSet>& gt) {
    double sum = 0.0;
    for (std::size_t j = 0; j < pred.size(); ++j) sum += nme(pred[j], gt[j]);
    return sum / static_cast<double>(pred.size());
}

std::vector<double> euclid_sdd(const std::vector<LandmarkSet>& pred,
                               const std::vector<LandmarkSet>& gt, double d) {
    const auto per_axis = sdd(pred, gt, d);
    std::vector<double> out(per_axis.size());
    for (std::size_t i = 0; i < per_axis.size(); ++i)
        out[i] = std::hypot(per_axis[i].x, per_axis[i].y);
    return out;
}

}  // namespace

SweepReport run_noise_sweep(const FrameSequence& seq, const std::string& gt_track_label,
                            const std::vector<double>& sigmas, const FusionParams& params,
                            const std::vector<std::uint64_t>& seeds) {
    if (sigmas.empty() || seeds.empty()) throw DataError("run_noise_sweep: empty sigma/seed list");
    const auto& gt = seq.track(gt_track_label);
    if (gt.size() < 2) throw DataError("run_noise_sweep: need at least 2 frames");
    const double d = mean_ocular_distance(gt);

    std::vector<double> sorted_sigmas = sigmas;
    std::sort(sorted_sigmas.begin(), sorted_sigmas.end());
    std::vector<std::uint64_t> sorted_seeds = seeds;
    std::sort(sorted_seeds.begin(), sorted_seeds.end());

    SweepReport rep;
    for (double sigma : sorted_sigmas)
        for (std::uint64_t seed : sorted_seeds) {
            DetectorSpec dspec;
            dspec.noise.kind = NoiseKind::gaussian;
            dspec.noise.sigma = sigma;
            dspec.noise.seed = seed;
            const auto detections = simulate_detections(gt, dspec);

            FrameSequence work;
            work.frames = seq.frames;
            work.fps = seq.fps;
            work.tracks["detected"] = detections;
            const FusedTrack fused = stabilize_sequence(work, "detected", params);

            SweepCell cell;
            cell.sigma = sigma;
            cell.seed = seed;
            cell.nme_raw = track_nme(detections, gt);
            cell.nme_fused = track_nme(fused.landmarks, gt);
            cell.sdd_raw_per_landmark = euclid_sdd(detections, gt, d);
            cell.sdd_fused_per_landmark = euclid_sdd(fused.landmarks, gt, d);
            auto mean_of = [](const std::vector<double>& v) {
                double s = 0.0;
                for (double x : v) s += x;
                return s / static_cast<double>(v.size());
            };
            cell.mean_sdd_raw = mean_of(cell.sdd_raw_per_landmark);
            cell.mean_sdd_fused = mean_of(cell.sdd_fused_per_landmark);
            rep.cells.push_back(std::move(cell));
        }
    return rep;
}

std::string SweepReport::to_csv() const {
    std::string out = "sigma,seed,nme_raw,nme_fused,mean_sdd_raw,mean_sdd_fused\n";
    for (const auto& c : cells)
        out += fmt(c.sigma) + "," + std::to_string(c.seed) + "," + fmt(c.nme_raw) + "," +
               fmt(c.nme_fused) + "," + fmt(c.mean_sdd_raw) + "," + fmt(c.mean_sdd_fused) + "\n";
    return out;
}

std::string SweepReport::cell_csv(const SweepCell& cell) const {
    std::string out = "landmark,sdd_raw,sdd_fused\n";
    for (std::size_t i = 0; i < cell.sdd_raw_per_landmark.size(); ++i)
        out += std::to_string(i + 1) + "," + fmt(cell.sdd_raw_per_landmark[i]) + "," +
               fmt(cell.sdd_fused_per_landmark[i]) + "\n";
    return out;
}

}  // namespace lmstab
