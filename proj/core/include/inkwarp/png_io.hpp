#pragma once

#include "inkwarp/image.hpp"

#include <filesystem>

namespace inkwarp {

/// Decodes any PNG (bit depth, palette, alpha) to luminance. Color uses
/// BT.601 weights; alpha is composited over white.
/// Throws IoError when the file cannot be read, DecodeError when it is not a
/// usable PNG.
GrayImage load_png(const std::filesystem::path& path);

/// Writes an 8-bit grayscale PNG. Throws IoError.
void save_png(const GrayImage& img, const std::filesystem::path& path);

} // namespace inkwarp
