#include "lmstab/synthetic.hpp"

#include <cmath>

namespace lmstab {

ImageBuffer synthetic_textured_image(int width, int height, double shift_x, double shift_y) {
    ImageBuffer img(width, height, 1);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            const double u = x - shift_x;
            const double v = y - shift_y;
            double s = 0.5;
            s += 0.16 * std::sin(0.37 * u + 0.21 * v);
            s += 0.13 * std::cos(0.18 * u - 0.43 * v + 1.3);
            s += 0.10 * std::sin(0.61 * u + 0.08 * v + 0.7) * std::cos(0.11 * u + 0.53 * v);
            s += 0.08 * std::sin(0.045 * u * 1.7 + 0.09 * v + 2.1);
            img.at(x, y) = static_cast<float>(std::min(1.0, std::max(0.0, s)));
        }
    return img;
}

LandmarkSet synthetic_face_landmarks(int width, int height) {
    const double cx = width / 2.0;
    const double cy = height / 2.0;
    const double s = 0.30 * std::min(width, height);  // face half-width

    LandmarkSet lms;
    lms.points.reserve(68);
    auto add = [&](double x, double y) { lms.points.push_back({cx + x * s, cy + y * s}); };

    // Contour, 17 points along the lower face ellipse (left ear to right ear).
    for (int i = 0; i < 17; ++i) {
        const double t = M_PI * (1.0 - i / 16.0);  // pi .. 0
        add(std::cos(t), 0.15 + 0.95 * std::sin(t));
    }
    // Brows, 5 points each.
    for (int i = 0; i < 5; ++i) add(-0.80 + 0.14 * i, -0.55 - 0.08 * std::sin(M_PI * i / 4.0));
    for (int i = 0; i < 5; ++i) add(0.24 + 0.14 * i, -0.55 - 0.08 * std::sin(M_PI * i / 4.0));
    // Nose bridge and base.
    for (int i = 0; i < 4; ++i) add(0.0, -0.40 + 0.15 * i);
    for (int i = 0; i < 5; ++i) add(-0.16 + 0.08 * i, 0.12);
    // Eyes, 6 points each; points 37 and 46 (1-indexed) are the outer corners.
    const double ey = -0.32;
    add(-0.72, ey);               // 37: left outer corner
    add(-0.58, ey - 0.07);
    add(-0.44, ey - 0.07);
    add(-0.32, ey);
    add(-0.44, ey + 0.07);
    add(-0.58, ey + 0.07);
    add(0.32, ey);
    add(0.44, ey - 0.07);
    add(0.58, ey - 0.07);
    add(0.72, ey);                // 46: right outer corner
    add(0.58, ey + 0.07);
    add(0.44, ey + 0.07);
    // Mouth: 12 outer + 8 inner points.
    for (int i = 0; i < 7; ++i) add(-0.36 + 0.12 * i, 0.45 - 0.10 * std::sin(M_PI * i / 6.0));
    for (int i = 1; i < 6; ++i) add(0.36 - 0.12 * i, 0.45 + 0.14 * std::sin(M_PI * i / 6.0));
    for (int i = 0; i < 5; ++i) add(-0.24 + 0.12 * i, 0.45 - 0.03 * std::sin(M_PI * i / 4.0));
    for (int i = 1; i < 4; ++i) add(0.24 - 0.12 * i, 0.45 + 0.05 * std::sin(M_PI * i / 3.0));

    return lms;
}

}  // namespace lmstab
