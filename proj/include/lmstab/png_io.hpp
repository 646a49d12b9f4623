#pragma once

#include <string>

#include "lmstab/image.hpp"

namespace lmstab {

// 8-bit PNG read/write (gray or RGB). Intensities are normalized to [0,1] on
// load and quantized with rounding on save.
ImageBuffer load_png(const std::string& path);
void save_png(const std::string& path, const ImageBuffer& img);

}  // namespace lmstab
