#include <doctest.h>

#include <cmath>

#include "lmstab/augmentation.hpp"
#include "lmstab/metrics.hpp"
#include "lmstab/synthetic.hpp"

using namespace lmstab;

namespace {

Storyboard identity_storyboard(int n_frames) {
    Storyboard sb;
    sb.n_frames = n_frames;
    return sb;
}

}  // namespace

TEST_CASE("storyboard JSON: defaults, round-trip, validation") {
    const auto sb = Storyboard::from_json(R"({"n_frames": 5, "fps": 25, "seed": 9})");
    CHECK(sb.n_frames == 5);
    CHECK(sb.fps == 25.0);
    CHECK(sb.start.brightness_gain == 1.0);

    const auto again = Storyboard::from_json(sb.to_json());
    CHECK(again.n_frames == sb.n_frames);

    CHECK_THROWS_AS(Storyboard::from_json(R"({"n_frames": 0})"), DataError);
    CHECK_THROWS_AS(Storyboard::from_json("oops"), ParseError);

    const auto geo = Storyboard::from_json(
        R"({"n_frames":2,"end":{"geometry":{"scale":2.0,"translate":[3,4],"center":[10,10]}}})");
    const Point2 c = geo.end.geometric.apply({10, 10});
    CHECK(c.x == doctest::Approx(13.0));
    CHECK(c.y == doctest::Approx(14.0));
}

TEST_CASE("interpolate_state: endpoints exact, scalars linear") {
    Storyboard sb;
    sb.n_frames = 11;
    sb.start.brightness_gain = 1.0;
    sb.end.brightness_gain = 2.0;
    sb.end.blur_sigma = 4.0;
    CHECK(interpolate_state(sb, 1).brightness_gain == 1.0);
    CHECK(interpolate_state(sb, 11).brightness_gain == 2.0);
    CHECK(interpolate_state(sb, 6).brightness_gain == doctest::Approx(1.5));
    CHECK(interpolate_state(sb, 6).blur_sigma == doctest::Approx(2.0));
    CHECK_THROWS_AS(interpolate_state(sb, 0), DataError);
    CHECK_THROWS_AS(interpolate_state(sb, 12), DataError);
}

TEST_CASE("interpolate_state: blur angle takes the shortest arc") {
    Storyboard sb;
    sb.n_frames = 3;
    sb.start.motion_blur_angle = 0.1;
    sb.end.motion_blur_angle = 2.0 * M_PI - 0.1;  // shortest path crosses zero
    const auto mid = interpolate_state(sb, 2);
    CHECK(std::abs(std::remainder(mid.motion_blur_angle, 2.0 * M_PI)) < 1e-9);
}

TEST_CASE("interpolate_state: translation homography interpolates linearly") {
    Storyboard sb;
    sb.n_frames = 11;
    sb.end.geometric = Homography::translation(10.0, 0.0);
    for (int j = 1; j <= 11; ++j) {
        const auto H = interpolate_state(sb, j).geometric;
        const Point2 p = H.apply({50.0, 50.0});
        CHECK(p.x == doctest::Approx(50.0 + (j - 1)).epsilon(1e-9));
        CHECK(p.y == doctest::Approx(50.0).epsilon(1e-9));
    }
}

TEST_CASE("render_frame: identity state leaves image and landmarks unchanged") {
    const auto img = synthetic_textured_image(96, 96);
    const auto lms = synthetic_face_landmarks(96, 96);
    const auto out = render_frame(img, lms, StoryboardState{}, 123);
    CHECK(out.image == img);
    for (std::size_t i = 0; i < lms.size(); ++i) CHECK(out.landmarks[i] == lms[i]);
    CHECK(out.landmarks_outside == 0);
}

TEST_CASE("render_frame: photometric-only changes keep landmarks bitwise equal") {
    const auto img = synthetic_textured_image(96, 96);
    const auto lms = synthetic_face_landmarks(96, 96);
    StoryboardState state;
    state.brightness_gain = 1.4;
    state.brightness_offset = -0.1;
    state.pixel_noise_sigma = 0.05;
    state.blur_sigma = 1.0;
    const auto out = render_frame(img, lms, state, 55);
    for (std::size_t i = 0; i < lms.size(); ++i) CHECK(out.landmarks[i] == lms[i]);
    CHECK_FALSE(out.image == img);
}

TEST_CASE("render_frame: pure scale about center matches the closed form") {
    const auto img = synthetic_textured_image(128, 128);
    const auto lms = synthetic_face_landmarks(128, 128);
    StoryboardState state;
    const double s = 1.25;
    state.geometric = Homography::similarity_projective(s, 0.0, 0.0, 0.0, 0.0, 0.0, {64.0, 64.0});
    const auto out = render_frame(img, lms, state, 1);
    for (std::size_t i = 0; i < lms.size(); ++i) {
        const Point2 expected{64.0 + s * (lms[i].x - 64.0), 64.0 + s * (lms[i].y - 64.0)};
        CHECK(distance(out.landmarks[i], expected) < 1e-9);
    }
}

TEST_CASE("generate_pseudo_video: single identity frame reproduces the input") {
    const auto img = synthetic_textured_image(64, 64);
    const auto lms = synthetic_face_landmarks(64, 64);
    const auto seq = generate_pseudo_video(img, lms, identity_storyboard(1));
    REQUIRE(seq.n_frames() == 1);
    CHECK(seq.frames[0] == img);
    for (std::size_t i = 0; i < lms.size(); ++i) CHECK(seq.track("gt")[0][i] == lms[i]);
}

TEST_CASE("generate_pseudo_video: photometric-only storyboard has exactly constant gt") {
    const auto img = synthetic_textured_image(96, 96);
    const auto lms = synthetic_face_landmarks(96, 96);
    Storyboard sb;
    sb.n_frames = 12;
    sb.seed = 4;
    sb.end.brightness_gain = 1.8;
    sb.end.pixel_noise_sigma = 0.03;
    const auto seq = generate_pseudo_video(img, lms, sb);
    const auto& gt = seq.track("gt");
    for (const auto& frame : gt)
        for (std::size_t i = 0; i < lms.size(); ++i) CHECK(frame[i] == lms[i]);
    // SDD of the gt track against itself over frames is exactly zero
    for (const auto& st : per_point_std(gt, outer_ocular_distance(lms))) {
        CHECK(st.x == 0.0);
        CHECK(st.y == 0.0);
    }
}

TEST_CASE("generate_pseudo_video: translation storyboard moves gt linearly in frame index") {
    const auto img = synthetic_textured_image(96, 96);
    const auto lms = synthetic_face_landmarks(96, 96);
    Storyboard sb;
    sb.n_frames = 11;
    sb.end.geometric = Homography::translation(10.0, 0.0);
    const auto seq = generate_pseudo_video(img, lms, sb);
    const auto& gt = seq.track("gt");
    for (int j = 0; j < 11; ++j)
        for (std::size_t i = 0; i < lms.size(); ++i) {
            CHECK(gt[j][i].x == doctest::Approx(lms[i].x + j).epsilon(1e-9));
            CHECK(std::abs(gt[j][i].y - lms[i].y) < 1e-9);
        }
}

TEST_CASE("generate_pseudo_video: ground-truth exactness against the frame homography") {
    const auto img = synthetic_textured_image(128, 128);
    const auto lms = synthetic_face_landmarks(128, 128);
    Storyboard sb;
    sb.n_frames = 10;
    sb.seed = 31;
    sb.end.geometric =
        Homography::similarity_projective(1.2, 0.1, 5.0, -3.0, 1e-4, -5e-5, {64.0, 64.0});
    sb.end.brightness_gain = 1.3;
    sb.end.pixel_noise_sigma = 0.02;
    const auto seq = generate_pseudo_video(img, lms, sb);
    for (int j = 1; j <= 10; ++j) {
        const auto H = interpolate_state(sb, j).geometric;
        const auto expected = apply_homography(lms, H);
        const auto& got = seq.track("gt")[j - 1];
        for (std::size_t i = 0; i < lms.size(); ++i) CHECK(distance(got[i], expected[i]) <= 1e-9);
    }
}

TEST_CASE("generate_pseudo_video: deterministic, including across thread counts") {
    const auto img = synthetic_textured_image(64, 64);
    const auto lms = synthetic_face_landmarks(64, 64);
    Storyboard sb;
    sb.n_frames = 6;
    sb.seed = 77;
    sb.end.pixel_noise_sigma = 0.05;
    sb.end.geometric = Homography::translation(4.0, 2.0);

    const auto a = generate_pseudo_video(img, lms, sb);
    const auto b = generate_pseudo_video(img, lms, sb);
    for (std::size_t j = 0; j < a.n_frames(); ++j) {
        CHECK(a.frames[j] == b.frames[j]);
        for (std::size_t i = 0; i < lms.size(); ++i)
            CHECK(a.track("gt")[j][i] == b.track("gt")[j][i]);
    }
}
