#include <doctest.h>

#include <cmath>
#include <random>

#include "lmstab/geometry.hpp"
#include "lmstab/image.hpp"
#include "lmstab/pts_io.hpp"
#include "lmstab/synthetic.hpp"

using namespace lmstab;

namespace {

LandmarkSet random_landmarks(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-500.0, 500.0);
    LandmarkSet lms;
    for (std::size_t i = 0; i < n; ++i) lms.points.push_back({u(rng), u(rng)});
    return lms;
}

Homography random_well_conditioned_h(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double scale = 0.5 + 0.1 * u(rng);
    const double angle = 0.3 * u(rng);
    return Homography::similarity_projective(scale, angle, 20 * u(rng), 20 * u(rng),
                                             1e-4 * u(rng), 1e-4 * u(rng));
}

}  // namespace

TEST_CASE("parse_pts: direct grammar case") {
    const auto lms = parse_pts("version: 1\nn_points: 2\n{\n1.0 2.0\n3.5 4.5\n}");
    REQUIRE(lms.size() == 2);
    CHECK(lms[0] == Point2{1.0, 2.0});
    CHECK(lms[1] == Point2{3.5, 4.5});
}

TEST_CASE("parse_pts: error cases name the line") {
    CHECK_THROWS_WITH_AS(parse_pts("n_points: 2\n{\n}"),
                         doctest::Contains("line 1"), ParseError);
    CHECK_THROWS_AS(parse_pts("version: 1\nn_points: 2\n{\n1 2\n}"), ParseError);
    CHECK_THROWS_WITH_AS(parse_pts("version: 1\nn_points: 1\n{\n1 abc\n}"),
                         doctest::Contains("line 4"), ParseError);
    CHECK_THROWS_AS(parse_pts("version: 1\nn_points: 1\n{\n1 2\n3 4\n}"), ParseError);
}

TEST_CASE("serialize_pts: fixed formatting, deterministic") {
    LandmarkSet lms{{{1.0, 2.0}}};
    const std::string expected = "version: 1\nn_points: 1\n{\n1.000000 2.000000\n}\n";
    CHECK(serialize_pts(lms) == expected);
    CHECK(serialize_pts(lms) == serialize_pts(lms));
}

TEST_CASE("pts round-trip within 1e-6 per coordinate") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        const auto lms = random_landmarks(rng, 1 + trial % 70);
        const auto back = parse_pts(serialize_pts(lms));
        REQUIRE(back.size() == lms.size());
        for (std::size_t i = 0; i < lms.size(); ++i) {
            CHECK(std::abs(back[i].x - lms[i].x) <= 1e-6);
            CHECK(std::abs(back[i].y - lms[i].y) <= 1e-6);
        }
    }
}

TEST_CASE("outer_ocular_distance: 3-4-5 triangle and symmetry") {
    LandmarkSet lms;
    lms.points.assign(68, {10.0, 10.0});
    lms[36] = {0.0, 0.0};
    lms[45] = {3.0, 4.0};
    CHECK(outer_ocular_distance(lms) == doctest::Approx(5.0));

    LandmarkSet mirrored = lms;
    for (auto& p : mirrored.points) p.x = -p.x;
    CHECK(outer_ocular_distance(mirrored) == doctest::Approx(outer_ocular_distance(lms)));
}

TEST_CASE("outer_ocular_distance: errors") {
    LandmarkSet wrong;
    wrong.points.assign(5, {0, 0});
    CHECK_THROWS_AS(outer_ocular_distance(wrong), DataError);

    LandmarkSet degenerate;
    degenerate.points.assign(68, {1.0, 1.0});
    CHECK_THROWS_AS(outer_ocular_distance(degenerate), DataError);
}

TEST_CASE("outer_ocular_distance: hand computation on a realistic annotation") {
    // 300-W style layout; d checked against manual arithmetic on points 37/46.
    const auto lms = synthetic_face_landmarks(256, 256);
    const double dx = lms[45].x - lms[36].x;
    const double dy = lms[45].y - lms[36].y;
    CHECK(outer_ocular_distance(lms) == doctest::Approx(std::sqrt(dx * dx + dy * dy)).epsilon(1e-12));
}

TEST_CASE("outer_ocular_distance: rigid invariance") {
    std::mt19937_64 rng(3);
    const auto lms = synthetic_face_landmarks(256, 256);
    const double d0 = outer_ocular_distance(lms);
    for (int trial = 0; trial < 10; ++trial) {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const auto H = Homography::similarity_projective(1.0, 3.0 * u(rng), 40 * u(rng),
                                                         40 * u(rng), 0, 0);
        const double d1 = outer_ocular_distance(apply_homography(lms, H));
        CHECK(std::abs(d1 - d0) / d0 < 1e-9);
    }
}

TEST_CASE("apply_homography: identity and translation") {
    std::mt19937_64 rng(5);
    const auto lms = random_landmarks(rng, 68);
    const auto same = apply_homography(lms, Homography::identity());
    for (std::size_t i = 0; i < lms.size(); ++i) CHECK(same[i] == lms[i]);

    const auto shifted = apply_homography(lms, Homography::translation(2.5, -7.0));
    for (std::size_t i = 0; i < lms.size(); ++i) {
        CHECK(shifted[i].x == doctest::Approx(lms[i].x + 2.5).epsilon(1e-12));
        CHECK(shifted[i].y == doctest::Approx(lms[i].y - 7.0).epsilon(1e-12));
    }
}

TEST_CASE("apply_homography: inverse undoes within 1e-9 relative") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const auto lms = random_landmarks(rng, 30);
        const auto H = random_well_conditioned_h(rng);
        const auto back = apply_homography(apply_homography(lms, H), H.inverse());
        for (std::size_t i = 0; i < lms.size(); ++i)
            CHECK(distance(back[i], lms[i]) <= 1e-9 * std::max(1.0, lms[i].norm()));
    }
}

TEST_CASE("homography group action: H2(H1 p) == (H2*H1) p") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const auto lms = random_landmarks(rng, 20);
        const auto H1 = random_well_conditioned_h(rng);
        const auto H2 = random_well_conditioned_h(rng);
        const auto a = apply_homography(apply_homography(lms, H1), H2);
        const auto b = apply_homography(lms, H2 * H1);
        for (std::size_t i = 0; i < lms.size(); ++i)
            CHECK(distance(a[i], b[i]) <= 1e-9 * std::max(1.0, a[i].norm()));
    }
}

TEST_CASE("homography: four-point fit reproduces the targets") {
    std::mt19937_64 rng(17);
    const std::array<Point2, 4> src{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
    std::uniform_real_distribution<double> u(-0.2, 0.2);
    for (int trial = 0; trial < 10; ++trial) {
        std::array<Point2, 4> dst{};
        for (int i = 0; i < 4; ++i) dst[i] = {src[i].x + u(rng), src[i].y + u(rng)};
        const auto H = Homography::from_four_points(src, dst);
        for (int i = 0; i < 4; ++i) CHECK(distance(H.apply(src[i]), dst[i]) < 1e-9);
    }
}

TEST_CASE("homography: point at infinity raises") {
    Homography H;
    H.m = {1, 0, 0, 0, 1, 0, 1, 0, 1};  // w = x + 1
    CHECK_THROWS_AS(H.apply({-1.0, 0.0}), DataError);
}

TEST_CASE("warp_image: identity is byte-identical") {
    const auto img = synthetic_textured_image(64, 48);
    const auto out = warp_image(img, Homography::identity());
    CHECK(out == img);
}

TEST_CASE("warp_image: integer translation of a constant image stays constant inside") {
    ImageBuffer img(32, 32, 1, 0.6f);
    const auto out = warp_image(img, Homography::translation(5, 3));
    for (int y = 8; y < 32; ++y)
        for (int x = 8; x < 32; ++x) CHECK(out.at(x, y) == doctest::Approx(0.6).epsilon(1e-6));
}

TEST_CASE("warp_image: H then H^-1 of a smooth gradient, interior MAE < 2/255") {
    ImageBuffer img(96, 96, 1);
    for (int y = 0; y < 96; ++y)
        for (int x = 0; x < 96; ++x) img.at(x, y) = static_cast<float>((x + y) / 190.0);
    const auto H = Homography::similarity_projective(1.05, 0.06, 2.0, -1.5, 1e-4, -1e-4,
                                                     {48.0, 48.0});
    const auto twice = warp_image(warp_image(img, H), H.inverse());
    double mae = 0.0;
    int count = 0;
    for (int y = 16; y < 80; ++y)
        for (int x = 16; x < 80; ++x) {
            mae += std::abs(twice.at(x, y) - img.at(x, y));
            ++count;
        }
    CHECK(mae / count < 2.0 / 255.0);
}
