#pragma once

#include "lmstab/image.hpp"

namespace lmstab {

// Deterministic textured test image: a smooth multi-frequency pattern with
// non-degenerate local structure everywhere, evaluated analytically so a
// shifted copy is exact: sample (x, y) of the shifted image equals the
// unshifted pattern at (x - shift_x, y - shift_y).
ImageBuffer synthetic_textured_image(int width, int height, double shift_x = 0.0,
                                     double shift_y = 0.0);

// A plausible 68-point iBUG-style landmark layout (contour, brows, nose, eyes,
// mouth) centered in a width x height frame. Points 37/46 are the outer eye
// corners, so the outer ocular distance is well defined.
LandmarkSet synthetic_face_landmarks(int width, int height);

}  // namespace lmstab
