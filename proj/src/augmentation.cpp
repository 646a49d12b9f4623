#include "lmstab/augmentation.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <random>
#include <thread>

#include <json.hpp>

#include "lmstab/geometry.hpp"

namespace lmstab {

void StoryboardState::validate() const {
    if (brightness_gain <= 0.0) throw DataError("storyboard: brightness_gain must be > 0");
    if (pixel_noise_sigma < 0.0 || blur_sigma < 0.0 || motion_blur_length < 0.0)
        throw DataError("storyboard: sigmas and blur length must be >= 0");
    geometric.normalized();  // throws when singular
}

void Storyboard::validate() const {
    if (n_frames < 1) throw DataError("storyboard: n_frames must be >= 1");
    if (fps <= 0.0) throw DataError("storyboard: fps must be > 0");
    start.validate();
    end.validate();
}

namespace {

nlohmann::json state_to_json(const StoryboardState& s) {
    nlohmann::json j;
    j["brightness_gain"] = s.brightness_gain;
    j["brightness_offset"] = s.brightness_offset;
    j["pixel_noise_sigma"] = s.pixel_noise_sigma;
    j["blur_sigma"] = s.blur_sigma;
    j["motion_blur"] = {{"length", s.motion_blur_length}, {"angle", s.motion_blur_angle}};
    j["geometry"] = {{"matrix",
                      {{s.geometric.m[0], s.geometric.m[1], s.geometric.m[2]},
                       {s.geometric.m[3], s.geometric.m[4], s.geometric.m[5]},
                       {s.geometric.m[6], s.geometric.m[7], s.geometric.m[8]}}}};
    return j;
}

StoryboardState state_from_json(const nlohmann::json& j) {
    StoryboardState s;
    s.brightness_gain = j.value("brightness_gain", 1.0);
    s.brightness_offset = j.value("brightness_offset", 0.0);
    s.pixel_noise_sigma = j.value("pixel_noise_sigma", 0.0);
    s.blur_sigma = j.value("blur_sigma", 0.0);
    if (j.contains("motion_blur")) {
        s.motion_blur_length = j["motion_blur"].value("length", 0.0);
        s.motion_blur_angle = j["motion_blur"].value("angle", 0.0);
    }
    if (j.contains("geometry")) {
        const auto& g = j["geometry"];
        if (g.contains("matrix")) {
            const auto& m = g["matrix"];
            if (!m.is_array() || m.size() != 3) throw ParseError("geometry.matrix must be 3x3");
            for (int r = 0; r < 3; ++r) {
                if (!m[r].is_array() || m[r].size() != 3)
                    throw ParseError("geometry.matrix must be 3x3");
                for (int c = 0; c < 3; ++c) s.geometric.m[r * 3 + c] = m[r][c].get<double>();
            }
            s.geometric = s.geometric.normalized();
        } else {
            const double scale = g.value("scale", 1.0);
            const double angle = g.value("rotate_deg", 0.0) * M_PI / 180.0;
            double tx = 0, ty = 0, cx = 0, cy = 0, px = 0, py = 0;
            if (g.contains("translate")) {
                tx = g["translate"][0].get<double>();
                ty = g["translate"][1].get<double>();
            }
            if (g.contains("center")) {
                cx = g["center"][0].get<double>();
                cy = g["center"][1].get<double>();
            }
            if (g.contains("perspective")) {
                px = g["perspective"][0].get<double>();
                py = g["perspective"][1].get<double>();
            }
            s.geometric =
                Homography::similarity_projective(scale, angle, tx, ty, px, py, {cx, cy});
        }
    }
    return s;
}

double lerp(double a, double b, double t) { return a + (b - a) * t; }

double lerp_angle(double a, double b, double t) {
    double diff = std::remainder(b - a, 2.0 * M_PI);
    return a + diff * t;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

int thread_budget() {
    if (const char* env = std::getenv("LANDMARK_STAB_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

}  // namespace

std::string Storyboard::to_json() const {
    nlohmann::json j;
    j["n_frames"] = n_frames;
    j["fps"] = fps;
    j["seed"] = seed;
    j["start"] = state_to_json(start);
    j["end"] = state_to_json(end);
    return j.dump(2) + "\n";
}

Storyboard Storyboard::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid storyboard JSON: ") + e.what());
    }
    Storyboard sb;
    sb.n_frames = j.value("n_frames", 1);
    sb.fps = j.value("fps", 30.0);
    sb.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("start")) sb.start = state_from_json(j["start"]);
    if (j.contains("end")) sb.end = state_from_json(j["end"]);
    sb.validate();
    return sb;
}

StoryboardState interpolate_state(const Storyboard& sb, int frame_index) {
    if (frame_index < 1 || frame_index > sb.n_frames)
        throw DataError("frame index out of range");
    if (frame_index == 1) return sb.start;
    if (frame_index == sb.n_frames) return sb.end;
    const double t = static_cast<double>(frame_index - 1) / (sb.n_frames - 1);

    StoryboardState s;
    s.brightness_gain = lerp(sb.start.brightness_gain, sb.end.brightness_gain, t);
    s.brightness_offset = lerp(sb.start.brightness_offset, sb.end.brightness_offset, t);
    s.pixel_noise_sigma = lerp(sb.start.pixel_noise_sigma, sb.end.pixel_noise_sigma, t);
    s.blur_sigma = lerp(sb.start.blur_sigma, sb.end.blur_sigma, t);
    s.motion_blur_length = lerp(sb.start.motion_blur_length, sb.end.motion_blur_length, t);
    s.motion_blur_angle = lerp_angle(sb.start.motion_blur_angle, sb.end.motion_blur_angle, t);

    const std::array<Point2, 4> corners{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
    std::array<Point2, 4> dst{};
    for (int i = 0; i < 4; ++i) {
        const Point2 a = sb.start.geometric.apply(corners[i]);
        const Point2 b = sb.end.geometric.apply(corners[i]);
        dst[i] = {lerp(a.x, b.x, t), lerp(a.y, b.y, t)};
    }
    s.geometric = Homography::from_four_points(corners, dst);
    return s;
}

RenderedFrame render_frame(const ImageBuffer& img, const LandmarkSet& lms,
                           const StoryboardState& state, std::uint64_t seed) {
    state.validate();
    RenderedFrame out;

    // Geometry: same homography for pixels and landmarks.
    const Homography H = state.geometric.normalized();
    const bool identity_geometry = H.m == Homography::identity().m;
    out.image = identity_geometry ? img : warp_image(img, H);
    out.landmarks = identity_geometry ? lms : apply_homography(lms, H);
    for (const auto& p : out.landmarks.points)
        if (p.x < 0 || p.y < 0 || p.x > img.width - 1 || p.y > img.height - 1)
            ++out.landmarks_outside;

    out.image = gaussian_blur(out.image, state.blur_sigma);
    out.image = motion_blur(out.image, state.motion_blur_length, state.motion_blur_angle);
    if (state.brightness_gain != 1.0 || state.brightness_offset != 0.0)
        out.image = adjust_brightness(out.image, state.brightness_gain, state.brightness_offset);

    if (state.pixel_noise_sigma > 0.0) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<float> noise(0.0f, static_cast<float>(state.pixel_noise_sigma));
        for (auto& v : out.image.samples)
            v = std::min(1.0f, std::max(0.0f, v + noise(rng)));
    }
    return out;
}

std::uint64_t frame_seed(std::uint64_t seed, int frame_index) {
    return splitmix64(seed ^ (0x7f4a7c15ULL + static_cast<std::uint64_t>(frame_index)));
}

FrameSequence generate_pseudo_video(const ImageBuffer& img, const LandmarkSet& lms,
                                    const Storyboard& sb) {
    sb.validate();
    lms.validate();

    FrameSequence seq;
    seq.fps = sb.fps;
    seq.frames.resize(sb.n_frames);
    std::vector<LandmarkSet> gt(sb.n_frames);

    const int threads = std::min(thread_budget(), sb.n_frames);
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        try {
            for (;;) {
                const int j = next.fetch_add(1);
                if (j >= sb.n_frames) return;
                const auto state = interpolate_state(sb, j + 1);
                auto rendered = render_frame(img, lms, state, frame_seed(sb.seed, j + 1));
                seq.frames[j] = std::move(rendered.image);
                gt[j] = std::move(rendered.landmarks);
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next.store(sb.n_frames);
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    seq.tracks["gt"] = std::move(gt);
    seq.validate();
    return seq;
}

}  // namespace lmstab
