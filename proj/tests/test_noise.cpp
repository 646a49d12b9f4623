#include <doctest.h>

#include <cmath>
#include <random>

#include "lmstab/noise.hpp"
#include "lmstab/synthetic.hpp"

using namespace lmstab;

namespace {

NoiseSpec gaussian_spec(double sigma, std::uint64_t seed) {
    NoiseSpec s;
    s.kind = NoiseKind::gaussian;
    s.sigma = sigma;
    s.seed = seed;
    return s;
}

std::vector<NoisySample> repeated_inject(const LandmarkSet& lms, NoiseSpec spec, int n) {
    std::mt19937_64 rng(spec.seed);
    std::vector<NoisySample> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) out.push_back(inject(lms, spec, 0.0, rng));
    return out;
}

}  // namespace

TEST_CASE("NoiseSpec JSON round-trip and validation") {
    const auto s = NoiseSpec::from_json(R"({"kind":"gaussian","sigma":0.03,"seed":7})");
    CHECK(s.kind == NoiseKind::gaussian);
    CHECK(s.sigma == 0.03);
    CHECK(s.seed == 7);
    const auto again = NoiseSpec::from_json(s.to_json());
    CHECK(again.sigma == s.sigma);

    CHECK_THROWS_AS(NoiseSpec::from_json(R"({"kind":"nope"})"), ParseError);
    CHECK_THROWS_AS(NoiseSpec::from_json(R"({"kind":"bernoulli","p":1.5})"), DataError);
    CHECK_THROWS_AS(NoiseSpec::from_json("not json"), ParseError);
}

TEST_CASE("inject: sigma 0 gaussian is the identity") {
    const auto lms = synthetic_face_landmarks(256, 256);
    const auto out = inject(lms, gaussian_spec(0.0, 5));
    for (std::size_t i = 0; i < lms.size(); ++i) CHECK(out.points[i] == lms[i]);
    for (bool m : out.mask) CHECK(m);
}

TEST_CASE("inject: determinism given equal seed, different given different seed") {
    const auto lms = synthetic_face_landmarks(256, 256);
    const auto a = inject(lms, gaussian_spec(0.02, 11));
    const auto b = inject(lms, gaussian_spec(0.02, 11));
    const auto c = inject(lms, gaussian_spec(0.02, 12));
    bool differs = false;
    for (std::size_t i = 0; i < lms.size(); ++i) {
        CHECK(a.points[i] == b.points[i]);
        differs = differs || !(a.points[i] == c.points[i]);
    }
    CHECK(differs);
}

TEST_CASE("inject: gaussian empirical std within 3% of sigma*d") {
    const auto lms = synthetic_face_landmarks(256, 256);
    const double d = outer_ocular_distance(lms);
    const double sigma = 0.03;
    const auto samples = repeated_inject(lms, gaussian_spec(sigma, 17), 10000);
    double ss = 0.0;
    for (const auto& s : samples) {
        const Point2 diff = s.points[30] - lms[30];
        ss += diff.x * diff.x + diff.y * diff.y;
    }
    const double emp = std::sqrt(ss / (2.0 * samples.size()));
    CHECK(emp == doctest::Approx(sigma * d).epsilon(0.03));
}

TEST_CASE("inject: bernoulli masking") {
    const auto lms = synthetic_face_landmarks(128, 128);
    NoiseSpec all;
    all.kind = NoiseKind::bernoulli;
    all.p = 1.0;
    all.seed = 3;
    const auto dropped = inject(lms, all);
    for (bool m : dropped.mask) CHECK_FALSE(m);
    // surviving coordinates are never altered
    for (std::size_t i = 0; i < lms.size(); ++i) CHECK(dropped.points[i] == lms[i]);

    all.p = 0.4;
    const auto some = inject(lms, all);
    for (std::size_t i = 0; i < lms.size(); ++i) CHECK(some.points[i] == lms[i]);
}

TEST_CASE("inject: salt-and-pepper displaces by exactly amplitude*d along one axis") {
    const auto lms = synthetic_face_landmarks(256, 256);
    const double d = outer_ocular_distance(lms);
    NoiseSpec sp;
    sp.kind = NoiseKind::salt_pepper;
    sp.p = 1.0;
    sp.amplitude = 0.1;
    sp.seed = 23;
    const auto out = inject(lms, sp);
    for (std::size_t i = 0; i < lms.size(); ++i) {
        const Point2 diff = out.points[i] - lms[i];
        const bool x_moved = diff.x != 0.0;
        const bool y_moved = diff.y != 0.0;
        CHECK(x_moved != y_moved);  // exactly one axis
        CHECK(std::abs(x_moved ? diff.x : diff.y) == doctest::Approx(0.1 * d).epsilon(1e-12));
    }
}

TEST_CASE("inject: random impulse replaces inside the range box") {
    const auto lms = synthetic_face_landmarks(256, 256);
    NoiseSpec ri;
    ri.kind = NoiseKind::random_impulse;
    ri.p = 1.0;
    ri.range = {10.0, 20.0, 50.0, 90.0};
    ri.seed = 29;
    const auto out = inject(lms, ri);
    for (const auto& p : out.points.points) {
        CHECK(p.x >= 10.0);
        CHECK(p.x <= 50.0);
        CHECK(p.y >= 20.0);
        CHECK(p.y <= 90.0);
    }
}

TEST_CASE("estimator_mean: trivial cases and masked exclusion") {
    NoisySample a{LandmarkSet{{{0, 0}}}, {true}};
    NoisySample b{LandmarkSet{{{2, 2}}}, {true}};
    CHECK(estimator_mean({a}, 0) == Point2{0, 0});
    const Point2 m = estimator_mean({a, b}, 0);
    CHECK(m == Point2{1, 1});

    NoisySample outlier{LandmarkSet{{{1000, 1000}}}, {false}};
    CHECK(estimator_mean({a, b, outlier}, 0) == Point2{1, 1});
    CHECK_THROWS_AS(estimator_mean({outlier}, 0), DataError);
}

TEST_CASE("estimator_mean: CLT recovery under gaussian noise") {
    const auto lms = synthetic_face_landmarks(256, 256);
    const double d = outer_ocular_distance(lms);
    const auto samples = repeated_inject(lms, gaussian_spec(0.03, 31), 1000);
    const Point2 est = estimator_mean(samples, 36);
    CHECK(distance(est, lms[36]) < 0.003 * d);
}

TEST_CASE("estimator_median: rejects the outlier, symmetric center") {
    NoisySample a{LandmarkSet{{{0, 0}}}, {true}};
    NoisySample b{LandmarkSet{{{1, 1}}}, {true}};
    NoisySample c{LandmarkSet{{{100, 100}}}, {true}};
    CHECK(estimator_median({a, b, c}, 0) == Point2{1, 1});

    NoisySample d1{LandmarkSet{{{-3, 5}}}, {true}};
    NoisySample d2{LandmarkSet{{{7, -1}}}, {true}};
    CHECK(estimator_median({d1, d2}, 0) == Point2{2, 2});
}

TEST_CASE("estimator matching: median beats mean under salt-and-pepper") {
    const auto lms = synthetic_face_landmarks(256, 256);
    NoiseSpec sp;
    sp.kind = NoiseKind::salt_pepper;
    sp.p = 0.2;
    sp.amplitude = 0.25;
    int median_wins = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        sp.seed = 1000 + t;
        const auto samples = repeated_inject(lms, sp, 1001);
        const double mean_err = distance(estimator_mean(samples, 48), lms[48]);
        const double median_err = distance(estimator_median(samples, 48), lms[48]);
        if (median_err < mean_err) ++median_wins;
    }
    CHECK(median_wins >= static_cast<int>(0.95 * trials));
}

TEST_CASE("estimator_mode: trivial and impulse-contaminated cases") {
    NoisySample a{LandmarkSet{{{4, 4}}}, {true}};
    CHECK(estimator_mode({a}, 0, 1.0) == Point2{4, 4});      // single sample -> itself
    CHECK(estimator_mode({a, a, a}, 0, 2.0) == Point2{4, 4});  // identical samples -> that point
    CHECK_THROWS_AS(estimator_mode({a}, 0, 0.0), DataError);

    // 80 copies of y plus 20 uniform impulses: mode lands within bin_width
    const auto lms = synthetic_face_landmarks(256, 256);
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> u(0.0, 256.0);
    std::vector<NoisySample> samples;
    for (int i = 0; i < 80; ++i) samples.push_back({lms, std::vector<bool>(68, true)});
    for (int i = 0; i < 20; ++i) {
        LandmarkSet noisy = lms;
        for (auto& p : noisy.points) p = {u(rng), u(rng)};
        samples.push_back({noisy, std::vector<bool>(68, true)});
    }
    const Point2 est = estimator_mode(samples, 10, 2.0);
    CHECK(distance(est, lms[10]) <= 2.0);
}

TEST_CASE("estimator matching: mode beats median under random impulse") {
    // gaussian pixel jitter plus one-sided impulse outliers: the impulses drag
    // the median off-center while the densest histogram bin stays on the face
    const auto lms = synthetic_face_landmarks(256, 256);
    NoiseSpec jitter;
    jitter.kind = NoiseKind::gaussian;
    jitter.sigma = 1.0;  // absolute px via d = 1
    NoiseSpec ri;
    ri.kind = NoiseKind::random_impulse;
    ri.p = 0.3;
    ri.range = {180.0, 180.0, 256.0, 256.0};
    int mode_wins = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        std::mt19937_64 rng(5000 + t);
        std::vector<NoisySample> samples;
        for (int i = 0; i < 501; ++i) {
            const auto base = inject(lms, jitter, 1.0, rng);
            samples.push_back(inject(base.points, ri, 0.0, rng));
        }
        const double median_err = distance(estimator_median(samples, 33), lms[33]);
        const double mode_err = distance(estimator_mode(samples, 33, 8.0), lms[33]);
        if (mode_err < median_err) ++mode_wins;
    }
    CHECK(mode_wins >= static_cast<int>(0.90 * trials));
}

TEST_CASE("zero_mean_test: verdicts") {
    std::mt19937_64 rng(73);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<Point2> centered;
    for (int i = 0; i < 10000; ++i) centered.push_back({g(rng), g(rng)});
    CHECK(zero_mean_test(centered).is_zero_mean_at_3sigma);

    std::vector<Point2> biased(100, Point2{1, 1});
    for (auto& p : biased) {
        p.x += 0.01 * g(rng);
        p.y += 0.01 * g(rng);
    }
    CHECK_FALSE(zero_mean_test(biased).is_zero_mean_at_3sigma);

    const std::vector<Point2> pair{{-3.0, 0.0}, {3.0, 0.0}};
    CHECK(zero_mean_test(pair).mean.x == 0.0);
    CHECK_THROWS_AS(zero_mean_test({{1, 1}}), DataError);
}

TEST_CASE("mean-estimator consistency: error shrinks as O(sigma/sqrt(n))") {
    const auto lms = synthetic_face_landmarks(256, 256);
    const double d = outer_ocular_distance(lms);
    const double sigma = 0.03;
    for (int n : {100, 1000, 10000}) {
        const auto samples = repeated_inject(lms, gaussian_spec(sigma, 83), n);
        const double err = distance(estimator_mean(samples, 20), lms[20]);
        CHECK(err <= 3.0 * sigma * d / std::sqrt(static_cast<double>(n)));
    }
}
