#include "lmstab/fusion.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace lmstab {

double alpha_weight(double d_dt, double d_fb, double tau_dt, double tau_fb) {
    if (d_dt < 0.0 || d_fb < 0.0) throw DataError("alpha_weight: negative distance");
    if (tau_dt <= 0.0 || tau_fb <= 0.0) throw DataError("alpha_weight: taus must be positive");
    if (std::isinf(d_fb) || std::isinf(d_dt)) return 1.0;
    return 1.0 - std::exp(-(d_dt / tau_dt + d_fb / tau_fb));
}

std::pair<LandmarkSet, std::vector<double>> fuse_frame(const LandmarkSet& detection,
                                                       const LandmarkSet& tracking,
                                                       const std::vector<double>& fb_error,
                                                       const FusionParams& params, double d) {
    if (detection.size() != tracking.size() || fb_error.size() != detection.size())
        throw DataError("fuse_frame: landmark count mismatch");
    double tau_dt = params.tau_dt;
    double tau_fb = params.tau_fb;
    if (params.normalize_by_d) {
        if (d <= 0.0) throw DataError("fuse_frame: normalize_by_d requires d > 0");
        tau_dt *= d / 100.0;
        tau_fb *= d / 100.0;
    }
    LandmarkSet out;
    out.points.resize(detection.size());
    std::vector<double> alphas(detection.size());
    for (std::size_t i = 0; i < detection.size(); ++i) {
        const double d_dt = distance(detection[i], tracking[i]);
        const double a = alpha_weight(d_dt, fb_error[i], tau_dt, tau_fb);
        alphas[i] = a;
        if (a >= 1.0)
            out[i] = detection[i];  // exact fallback, no arithmetic with lost tracking points
        else
            out[i] = detection[i] * a + tracking[i] * (1.0 - a);
    }
    return {std::move(out), std::move(alphas)};
}

FusedTrack stabilize_sequence(const FrameSequence& seq, const std::string& detection_track_label,
                              const FusionParams& params) {
    const auto& detections = seq.track(detection_track_label);
    if (seq.frames.empty()) throw DataError("stabilize_sequence: empty sequence");
    seq.validate();

    const std::size_t n = seq.n_frames();
    const std::size_t n_lm = detections[0].size();
    FusedTrack out;
    out.landmarks.reserve(n);
    out.alphas.reserve(n);
    out.d_dt.reserve(n);
    out.d_fb.reserve(n);

    out.landmarks.push_back(detections[0]);
    out.alphas.emplace_back(n_lm, 1.0);
    out.d_dt.emplace_back(n_lm, 0.0);
    out.d_fb.emplace_back(n_lm, 0.0);

    for (std::size_t j = 1; j < n; ++j) {
        const LandmarkSet& seed =
            params.seed_from_detections ? detections[j - 1] : out.landmarks[j - 1];
        const auto fb =
            forward_backward(seq.frames[j - 1], seq.frames[j], seed.points, params.flow);
        LandmarkSet tracked{fb.forward.points};

        double d = 0.0;
        if (params.normalize_by_d) d = outer_ocular_distance(detections[j]);
        auto [fused, alphas] = fuse_frame(detections[j], tracked, fb.fb_error, params, d);

        std::vector<double> ddt(n_lm);
        for (std::size_t i = 0; i < n_lm; ++i) ddt[i] = distance(detections[j][i], tracked[i]);
        out.landmarks.push_back(std::move(fused));
        out.alphas.push_back(std::move(alphas));
        out.d_dt.push_back(std::move(ddt));
        out.d_fb.push_back(fb.fb_error);
    }
    return out;
}

FusedTrack correct_dataset(const FrameSequence& seq, const std::string& gt_track_label,
                           const FusionParams& params) {
    return stabilize_sequence(seq, gt_track_label, params);
}

std::string FusedTrack::diagnostics_csv() const {
    std::string out = "frame,landmark,alpha,d_dt,d_fb\n";
    char buf[128];
    for (std::size_t j = 0; j < landmarks.size(); ++j)
        for (std::size_t i = 0; i < alphas[j].size(); ++i) {
            const double fb = d_fb[j][i];
            if (std::isinf(fb))
                std::snprintf(buf, sizeof(buf), "%zu,%zu,%.9g,%.9g,inf\n", j + 1, i + 1,
                              alphas[j][i], d_dt[j][i]);
            else
                std::snprintf(buf, sizeof(buf), "%zu,%zu,%.9g,%.9g,%.9g\n", j + 1, i + 1,
                              alphas[j][i], d_dt[j][i], fb);
            out += buf;
        }
    return out;
}

}  // namespace lmstab
