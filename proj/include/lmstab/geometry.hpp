#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "lmstab/errors.hpp"

namespace lmstab {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    Point2 operator+(const Point2& o) const { return {x + o.x, y + o.y}; }
    Point2 operator-(const Point2& o) const { return {x - o.x, y - o.y}; }
    Point2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Point2& o) const { return x == o.x && y == o.y; }

    double norm() const { return std::hypot(x, y); }
    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline double distance(const Point2& a, const Point2& b) { return (a - b).norm(); }

// Ordered 2D landmark points for one face. The default layout is the 68-point
// iBUG markup (contour 1-17, brows 18-27, nose 28-36, eyes 37-48, mouth 49-68,
// 1-indexed).
struct LandmarkSet {
    std::vector<Point2> points;

    LandmarkSet() = default;
    explicit LandmarkSet(std::vector<Point2> pts) : points(std::move(pts)) {}

    std::size_t size() const { return points.size(); }
    const Point2& operator[](std::size_t i) const { return points[i]; }
    Point2& operator[](std::size_t i) { return points[i]; }

    void validate() const {
        for (const auto& p : points)
            if (!p.finite()) throw DataError("landmark set contains non-finite coordinate");
    }
};

// Outer ocular distance: Euclidean distance between the outer eye corners
// (iBUG points 37 and 46, 1-indexed). The normalizer d of all metrics.
double outer_ocular_distance(const LandmarkSet& lms);

// 3x3 projective transform, stored row-major and normalized so m[8] == 1.
struct Homography {
    std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

    static Homography identity() { return {}; }
    static Homography translation(double tx, double ty);
    static Homography scaling(double sx, double sy);
    // Similarity + projective row, composed about a center point:
    // T(center) * [s*R(angle) | t ; perspective 1] * T(-center)
    static Homography similarity_projective(double scale, double angle, double tx, double ty,
                                            double px, double py, Point2 center = {0, 0});
    // Exact fit from four point correspondences (DLT, 8x8 solve).
    static Homography from_four_points(const std::array<Point2, 4>& src,
                                       const std::array<Point2, 4>& dst);

    double det() const;
    Homography normalized() const;
    Homography inverse() const;
    Homography operator*(const Homography& rhs) const;  // this after rhs

    Point2 apply(const Point2& p) const;
};

LandmarkSet apply_homography(const LandmarkSet& lms, const Homography& H);

}  // namespace lmstab
