#include "lmstab/noise.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <json.hpp>

namespace lmstab {

namespace {

const std::map<std::string, NoiseKind>& kind_names() {
    static const std::map<std::string, NoiseKind> names = {
        {"gaussian", NoiseKind::gaussian},
        {"poisson", NoiseKind::poisson},
        {"bernoulli", NoiseKind::bernoulli},
        {"salt_pepper", NoiseKind::salt_pepper},
        {"random_impulse", NoiseKind::random_impulse},
    };
    return names;
}

std::string kind_to_string(NoiseKind k) {
    for (const auto& [name, kind] : kind_names())
        if (kind == k) return name;
    return "?";
}

bool needs_d(const NoiseSpec& s) {
    return (s.kind == NoiseKind::gaussian && s.sigma > 0.0) ||
           (s.kind == NoiseKind::salt_pepper);
}

}  // namespace

void NoiseSpec::validate() const {
    auto prob_ok = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (sigma < 0.0 || lambda < 0.0 || scale < 0.0 || amplitude < 0.0)
        throw DataError("noise spec: sigma/lambda/scale/amplitude must be >= 0");
    if (!prob_ok(p)) throw DataError("noise spec: probability must be in [0,1]");
    if (kind == NoiseKind::random_impulse && (range.x1 < range.x0 || range.y1 < range.y0))
        throw DataError("noise spec: empty impulse range");
}

std::string NoiseSpec::to_json() const {
    nlohmann::json j;
    j["kind"] = kind_to_string(kind);
    j["seed"] = seed;
    switch (kind) {
        case NoiseKind::gaussian:
            j["sigma"] = sigma;
            break;
        case NoiseKind::poisson:
            j["lambda"] = lambda;
            j["scale"] = scale;
            break;
        case NoiseKind::bernoulli:
            j["p"] = p;
            break;
        case NoiseKind::salt_pepper:
            j["p"] = p;
            j["amplitude"] = amplitude;
            break;
        case NoiseKind::random_impulse:
            j["p"] = p;
            j["range"] = {range.x0, range.y0, range.x1, range.y1};
            break;
    }
    return j.dump();
}

NoiseSpec NoiseSpec::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid noise spec JSON: ") + e.what());
    }
    NoiseSpec s;
    const std::string kind = j.value("kind", "");
    auto it = kind_names().find(kind);
    if (it == kind_names().end()) throw ParseError("unknown noise kind: '" + kind + "'");
    s.kind = it->second;
    s.sigma = j.value("sigma", 0.0);
    s.lambda = j.value("lambda", 0.0);
    s.scale = j.value("scale", 0.0);
    s.p = j.value("p", 0.0);
    s.amplitude = j.value("amplitude", 0.0);
    s.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("range")) {
        const auto& r = j["range"];
        if (!r.is_array() || r.size() != 4)
            throw ParseError("noise spec: range must be [x0,y0,x1,y1]");
        s.range = {r[0], r[1], r[2], r[3]};
    }
    s.validate();
    return s;
}

NoisySample inject(const LandmarkSet& lms, const NoiseSpec& spec, double d, std::mt19937_64& rng) {
    spec.validate();
    if (d <= 0.0 && needs_d(spec)) d = outer_ocular_distance(lms);

    NoisySample out{lms, std::vector<bool>(lms.size(), true)};
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    switch (spec.kind) {
        case NoiseKind::gaussian: {
            if (spec.sigma == 0.0) break;
            std::normal_distribution<double> g(0.0, spec.sigma * d);
            for (auto& p : out.points.points) {
                p.x += g(rng);
                p.y += g(rng);
            }
            break;
        }
        case NoiseKind::poisson: {
            if (spec.scale == 0.0 || spec.lambda == 0.0) break;
            std::poisson_distribution<long> pd(spec.lambda);
            for (auto& p : out.points.points) {
                p.x += spec.scale * (static_cast<double>(pd(rng)) - spec.lambda);
                p.y += spec.scale * (static_cast<double>(pd(rng)) - spec.lambda);
            }
            break;
        }
        case NoiseKind::bernoulli: {
            for (std::size_t i = 0; i < out.points.size(); ++i)
                if (unit(rng) < spec.p) out.mask[i] = false;
            break;
        }
        case NoiseKind::salt_pepper: {
            for (auto& p : out.points.points) {
                if (unit(rng) >= spec.p) continue;
                const bool horizontal = unit(rng) < 0.5;
                const double sign = unit(rng) < 0.5 ? 1.0 : -1.0;  // salt vs pepper
                const double step = sign * spec.amplitude * d;
                if (horizontal)
                    p.x += step;
                else
                    p.y += step;
            }
            break;
        }
        case NoiseKind::random_impulse: {
            std::uniform_real_distribution<double> ux(spec.range.x0, spec.range.x1);
            std::uniform_real_distribution<double> uy(spec.range.y0, spec.range.y1);
            for (auto& p : out.points.points) {
                if (unit(rng) >= spec.p) continue;
                p = {ux(rng), uy(rng)};
            }
            break;
        }
    }
    return out;
}

NoisySample inject(const LandmarkSet& lms, const NoiseSpec& spec, double d) {
    std::mt19937_64 rng(spec.seed);
    return inject(lms, spec, d, rng);
}

namespace {

std::vector<Point2> valid_points(const std::vector<NoisySample>& samples, std::size_t idx) {
    std::vector<Point2> pts;
    pts.reserve(samples.size());
    for (const auto& s : samples) {
        if (idx >= s.points.size()) throw DataError("point index out of range");
        if (s.mask[idx]) pts.push_back(s.points[idx]);
    }
    if (pts.empty()) throw DataError("no valid samples at point index");
    return pts;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

Point2 estimator_mean(const std::vector<NoisySample>& samples, std::size_t point_index) {
    const auto pts = valid_points(samples, point_index);
    double sx = 0.0, sy = 0.0;
    for (const auto& p : pts) {
        sx += p.x;
        sy += p.y;
    }
    const double n = static_cast<double>(pts.size());
    return {sx / n, sy / n};
}

Point2 estimator_median(const std::vector<NoisySample>& samples, std::size_t point_index) {
    const auto pts = valid_points(samples, point_index);
    std::vector<double> xs, ys;
    xs.reserve(pts.size());
    ys.reserve(pts.size());
    for (const auto& p : pts) {
        xs.push_back(p.x);
        ys.push_back(p.y);
    }
    return {median_of(std::move(xs)), median_of(std::move(ys))};
}

Point2 estimator_mode(const std::vector<NoisySample>& samples, std::size_t point_index,
                      double bin_width) {
    if (bin_width <= 0.0) throw DataError("bin_width must be positive");
    const auto pts = valid_points(samples, point_index);
    double min_x = pts[0].x, min_y = pts[0].y;
    for (const auto& p : pts) {
        min_x = std::min(min_x, p.x);
        min_y = std::min(min_y, p.y);
    }
    struct Bin {
        int count = 0;
        double sx = 0.0, sy = 0.0;
    };
    std::map<std::pair<long, long>, Bin> bins;  // ordered: smallest index wins ties
    for (const auto& p : pts) {
        const long bx = static_cast<long>(std::floor((p.x - min_x) / bin_width));
        const long by = static_cast<long>(std::floor((p.y - min_y) / bin_width));
        Bin& b = bins[{by, bx}];
        ++b.count;
        b.sx += p.x;
        b.sy += p.y;
    }
    const Bin* best = nullptr;
    for (const auto& [key, bin] : bins)
        if (!best || bin.count > best->count) best = &bin;
    // center of the densest bin, taken as the centroid of its members so that
    // identical samples reproduce exactly
    return {best->sx / best->count, best->sy / best->count};
}

ZeroMeanVerdict zero_mean_test(const std::vector<Point2>& diffs) {
    if (diffs.size() < 2) throw DataError("zero_mean_test needs at least 2 samples");
    const double n = static_cast<double>(diffs.size());
    double mx = 0.0, my = 0.0;
    for (const auto& p : diffs) {
        mx += p.x;
        my += p.y;
    }
    mx /= n;
    my /= n;
    double vx = 0.0, vy = 0.0;
    for (const auto& p : diffs) {
        vx += (p.x - mx) * (p.x - mx);
        vy += (p.y - my) * (p.y - my);
    }
    const double sx = std::sqrt(vx / (n - 1.0) / n);
    const double sy = std::sqrt(vy / (n - 1.0) / n);
    ZeroMeanVerdict v;
    v.mean = {mx, my};
    v.std_error = {sx, sy};
    v.is_zero_mean_at_3sigma = std::abs(mx) <= 3.0 * sx && std::abs(my) <= 3.0 * sy;
    return v;
}

}  // namespace lmstab
