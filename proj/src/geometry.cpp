#include "lmstab/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace lmstab {

double outer_ocular_distance(const LandmarkSet& lms) {
    if (lms.size() != 68)
        throw DataError("outer_ocular_distance requires the 68-point iBUG layout, got N=" +
                        std::to_string(lms.size()));
    const Point2& left = lms[36];   // point 37, 1-indexed
    const Point2& right = lms[45];  // point 46
    double d = distance(left, right);
    if (d <= 0.0) throw DataError("degenerate face: coincident outer eye corners");
    return d;
}

Homography Homography::translation(double tx, double ty) {
    Homography h;
    h.m = {1, 0, tx, 0, 1, ty, 0, 0, 1};
    return h;
}

Homography Homography::scaling(double sx, double sy) {
    Homography h;
    h.m = {sx, 0, 0, 0, sy, 0, 0, 0, 1};
    return h;
}

Homography Homography::similarity_projective(double scale, double angle, double tx, double ty,
                                             double px, double py, Point2 center) {
    Homography core;
    const double c = scale * std::cos(angle);
    const double s = scale * std::sin(angle);
    core.m = {c, -s, tx, s, c, ty, px, py, 1};
    return translation(center.x, center.y) * core * translation(-center.x, -center.y);
}

double Homography::det() const {
    return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
           m[2] * (m[3] * m[7] - m[4] * m[6]);
}

Homography Homography::normalized() const {
    if (std::abs(m[8]) < 1e-15) throw DataError("homography cannot be normalized: m[2][2] ~ 0");
    Homography h;
    for (int i = 0; i < 9; ++i) h.m[i] = m[i] / m[8];
    if (std::abs(h.det()) <= 1e-12) throw DataError("homography is singular after normalization");
    return h;
}

Homography Homography::inverse() const {
    const double d = det();
    if (std::abs(d) <= 1e-12) throw DataError("homography is singular, cannot invert");
    Homography r;
    r.m[0] = (m[4] * m[8] - m[5] * m[7]) / d;
    r.m[1] = (m[2] * m[7] - m[1] * m[8]) / d;
    r.m[2] = (m[1] * m[5] - m[2] * m[4]) / d;
    r.m[3] = (m[5] * m[6] - m[3] * m[8]) / d;
    r.m[4] = (m[0] * m[8] - m[2] * m[6]) / d;
    r.m[5] = (m[2] * m[3] - m[0] * m[5]) / d;
    r.m[6] = (m[3] * m[7] - m[4] * m[6]) / d;
    r.m[7] = (m[1] * m[6] - m[0] * m[7]) / d;
    r.m[8] = (m[0] * m[4] - m[1] * m[3]) / d;
    return r.normalized();
}

Homography Homography::operator*(const Homography& rhs) const {
    Homography r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0;
            for (int k = 0; k < 3; ++k) s += m[i * 3 + k] * rhs.m[k * 3 + j];
            r.m[i * 3 + j] = s;
        }
    return r.normalized();
}

Point2 Homography::apply(const Point2& p) const {
    const double w = m[6] * p.x + m[7] * p.y + m[8];
    if (std::abs(w) <= 1e-9) throw DataError("point maps to the line at infinity");
    return {(m[0] * p.x + m[1] * p.y + m[2]) / w, (m[3] * p.x + m[4] * p.y + m[5]) / w};
}

namespace {

// Gaussian elimination with partial pivoting for the 8x8 DLT system.
void solve8(std::array<std::array<double, 9>, 8>& a) {
    for (int col = 0; col < 8; ++col) {
        int piv = col;
        for (int r = col + 1; r < 8; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-12) throw DataError("degenerate correspondences for homography fit");
        std::swap(a[col], a[piv]);
        for (int r = 0; r < 8; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            for (int c = col; c < 9; ++c) a[r][c] -= f * a[col][c];
        }
    }
    for (int r = 0; r < 8; ++r) a[r][8] /= a[r][r];
}

}  // namespace

Homography Homography::from_four_points(const std::array<Point2, 4>& src,
                                        const std::array<Point2, 4>& dst) {
    std::array<std::array<double, 9>, 8> a{};
    for (int i = 0; i < 4; ++i) {
        const auto& s = src[i];
        const auto& t = dst[i];
        a[2 * i] = {s.x, s.y, 1, 0, 0, 0, -s.x * t.x, -s.y * t.x, t.x};
        a[2 * i + 1] = {0, 0, 0, s.x, s.y, 1, -s.x * t.y, -s.y * t.y, t.y};
    }
    solve8(a);
    Homography h;
    for (int i = 0; i < 8; ++i) h.m[i] = a[i][8];
    h.m[8] = 1;
    return h.normalized();
}

LandmarkSet apply_homography(const LandmarkSet& lms, const Homography& H) {
    LandmarkSet out;
    out.points.reserve(lms.size());
    for (const auto& p : lms.points) out.points.push_back(H.apply(p));
    return out;
}

}  // namespace lmstab
