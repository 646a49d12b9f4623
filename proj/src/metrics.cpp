#include "lmstab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace lmstab {

namespace {

// Shifted two-pass sample standard deviation (n-1 denominator). Shifting by
// the first value keeps constant inputs at exactly zero.
double sample_std(const std::vector<double>& v) {
    const std::size_t n = v.size();
    double mean_z = 0.0;
    for (double x : v) mean_z += x - v[0];
    mean_z /= static_cast<double>(n);
    double ss = 0.0;
    for (double x : v) {
        const double dz = (x - v[0]) - mean_z;
        ss += dz * dz;
    }
    return std::sqrt(ss / static_cast<double>(n - 1));
}

void check_track_pair(const std::vector<LandmarkSet>& pred, const std::vector<LandmarkSet>& gt) {
    if (pred.size() != gt.size()) throw DataError("track length mismatch");
    if (pred.size() < 2) throw DataError("need at least 2 frames");
    for (std::size_t j = 0; j < pred.size(); ++j)
        if (pred[j].size() != gt[j].size() || pred[j].size() != pred[0].size())
            throw DataError("landmark count mismatch across tracks/frames");
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

double nme(const LandmarkSet& pred, const LandmarkSet& gt) {
    if (pred.size() != gt.size()) throw DataError("nme: landmark count mismatch");
    const double d = outer_ocular_distance(gt);
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) sum += distance(pred[i], gt[i]);
    return sum / static_cast<double>(pred.size()) / d;
}

double mean_ocular_distance(const std::vector<LandmarkSet>& track) {
    if (track.empty()) throw DataError("empty track");
    double sum = 0.0;
    for (const auto& lms : track) sum += outer_ocular_distance(lms);
    return sum / static_cast<double>(track.size());
}

std::vector<AxisStats> per_point_std(const std::vector<LandmarkSet>& track, double d) {
    if (track.size() < 2) throw DataError("per_point_std needs at least 2 frames");
    if (d <= 0.0) throw DataError("invalid normalizer d");
    const std::size_t n_lm = track[0].size();
    std::vector<AxisStats> out(n_lm);
    std::vector<double> xs(track.size()), ys(track.size());
    for (std::size_t i = 0; i < n_lm; ++i) {
        for (std::size_t j = 0; j < track.size(); ++j) {
            xs[j] = track[j][i].x;
            ys[j] = track[j][i].y;
        }
        out[i] = {sample_std(xs) / d, sample_std(ys) / d};
    }
    return out;
}

std::vector<AxisStats> sdd(const std::vector<LandmarkSet>& track_pred,
                           const std::vector<LandmarkSet>& track_gt, double d) {
    check_track_pair(track_pred, track_gt);
    if (d <= 0.0) throw DataError("invalid normalizer d");
    const std::size_t n_lm = track_pred[0].size();
    std::vector<AxisStats> out(n_lm);
    std::vector<double> dx(track_pred.size()), dy(track_pred.size());
    for (std::size_t i = 0; i < n_lm; ++i) {
        for (std::size_t j = 0; j < track_pred.size(); ++j) {
            dx[j] = track_pred[j][i].x - track_gt[j][i].x;
            dy[j] = track_pred[j][i].y - track_gt[j][i].y;
        }
        out[i] = {sample_std(dx) / d, sample_std(dy) / d};
    }
    return out;
}

StabilityReport noise_report(const std::vector<LandmarkSet>& track_pred,
                             const std::vector<LandmarkSet>& track_gt, int bins) {
    check_track_pair(track_pred, track_gt);
    if (bins < 2) throw DataError("need at least 2 histogram bins");

    StabilityReport rep;
    rep.n_frames = static_cast<int>(track_pred.size());
    rep.d_used = mean_ocular_distance(track_gt);

    const auto sdd_stats = sdd(track_pred, track_gt, rep.d_used);
    const auto std_stats = per_point_std(track_pred, rep.d_used);

    const std::size_t n_lm = track_pred[0].size();
    rep.per_landmark.resize(n_lm);
    for (std::size_t i = 0; i < n_lm; ++i) {
        auto& st = rep.per_landmark[i];
        st.sdd = sdd_stats[i];
        st.std_dev = std_stats[i];
        st.sdd_euclid = std::hypot(st.sdd.x, st.sdd.y);

        double mx = 0.0, my = 0.0, max_abs = 0.0;
        for (std::size_t j = 0; j < track_pred.size(); ++j) {
            const double dx = track_pred[j][i].x - track_gt[j][i].x;
            const double dy = track_pred[j][i].y - track_gt[j][i].y;
            mx += dx;
            my += dy;
            max_abs = std::max({max_abs, std::abs(dx), std::abs(dy)});
        }
        st.mean_diff = {mx / rep.n_frames / rep.d_used, my / rep.n_frames / rep.d_used};

        st.hist.bins = bins;
        st.hist.range = max_abs > 0.0 ? max_abs : 1.0;
        st.hist.counts.assign(static_cast<std::size_t>(bins) * bins, 0);
        const double width = 2.0 * st.hist.range / bins;
        for (std::size_t j = 0; j < track_pred.size(); ++j) {
            const double dx = track_pred[j][i].x - track_gt[j][i].x;
            const double dy = track_pred[j][i].y - track_gt[j][i].y;
            int bx = static_cast<int>((dx + st.hist.range) / width);
            int by = static_cast<int>((dy + st.hist.range) / width);
            bx = std::clamp(bx, 0, bins - 1);
            by = std::clamp(by, 0, bins - 1);
            ++st.hist.at(bx, by);
        }
    }
    return rep;
}

std::string StabilityReport::to_csv() const {
    std::string out = "landmark,axis,mean_diff,sdd,std\n";
    for (std::size_t i = 0; i < per_landmark.size(); ++i) {
        const auto& st = per_landmark[i];
        const std::string lm = std::to_string(i + 1);
        out += lm + ",x," + fmt(st.mean_diff.x) + "," + fmt(st.sdd.x) + "," + fmt(st.std_dev.x) + "\n";
        out += lm + ",y," + fmt(st.mean_diff.y) + "," + fmt(st.sdd.y) + "," + fmt(st.std_dev.y) + "\n";
        out += lm + ",euclid," + fmt(std::hypot(st.mean_diff.x, st.mean_diff.y)) + "," +
               fmt(st.sdd_euclid) + "," + fmt(std::hypot(st.std_dev.x, st.std_dev.y)) + "\n";
    }
    return out;
}

std::string StabilityReport::to_json() const {
    nlohmann::json j;
    j["d_used"] = d_used;
    j["n_frames"] = n_frames;
    auto& arr = j["landmarks"] = nlohmann::json::array();
    for (std::size_t i = 0; i < per_landmark.size(); ++i) {
        const auto& st = per_landmark[i];
        nlohmann::json e;
        e["landmark"] = i + 1;
        e["mean_diff"] = {{"x", st.mean_diff.x}, {"y", st.mean_diff.y}};
        e["sdd"] = {{"x", st.sdd.x}, {"y", st.sdd.y}, {"euclid", st.sdd_euclid}};
        e["std"] = {{"x", st.std_dev.x}, {"y", st.std_dev.y}};
        e["hist"] = {{"bins", st.hist.bins}, {"range_px", st.hist.range}};
        arr.push_back(std::move(e));
    }
    return j.dump(2) + "\n";
}

std::string StabilityReport::histogram_csv(std::size_t landmark) const {
    const auto& h = per_landmark.at(landmark).hist;
    std::string out;
    for (int by = 0; by < h.bins; ++by) {
        for (int bx = 0; bx < h.bins; ++bx) {
            if (bx) out += ",";
            out += std::to_string(h.at(bx, by));
        }
        out += "\n";
    }
    return out;
}

}  // namespace lmstab
