#pragma once

#include <string>

#include "lmstab/geometry.hpp"

namespace lmstab {

// Parser/serializer for the 300-W / 300-VW pts annotation format:
//   version: 1
//   n_points: K
//   {
//   x y          (K lines)
//   }
LandmarkSet parse_pts(const std::string& text);

// Deterministic serialization with 6 fractional digits.
std::string serialize_pts(const LandmarkSet& lms);

LandmarkSet load_pts(const std::string& path);
void save_pts(const std::string& path, const LandmarkSet& lms);

}  // namespace lmstab
