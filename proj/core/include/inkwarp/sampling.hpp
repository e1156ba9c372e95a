#pragma once

#include "inkwarp/image.hpp"
#include "inkwarp/parallel.hpp"

#include <cmath>
#include <vector>

namespace inkwarp {

/// Point in the normalized square [-1, 1]^2: origin at the image center,
/// x to the right, y UP. Pixel row 0 is the top of the image, so y = +1 is
/// the top edge.
struct NormPoint {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const NormPoint&, const NormPoint&) = default;
};

/// Pixel-center coordinates: (0, 0) is the center of the top-left pixel.
struct PixelPoint {
  double col = 0.0;
  double row = 0.0;
};

inline NormPoint to_norm(PixelPoint p, int width, int height) {
  return {2.0 * (p.col + 0.5) / width - 1.0, 1.0 - 2.0 * (p.row + 0.5) / height};
}

inline PixelPoint to_pixel(NormPoint p, int width, int height) {
  return {(p.x + 1.0) * width / 2.0 - 0.5, (1.0 - p.y) * height / 2.0 - 0.5};
}

/// Bilinear sample at pixel-center coordinates; pixels outside the image
/// read as paper white.
double sample_bilinear(const GrayImage& img, double col, double row);

/// Per-output-pixel source coordinates (pixel-center units) for a backward
/// warp. Built once per transform and canvas and reusable across images.
struct SampleGrid {
  int width = 0;
  int height = 0;
  std::vector<double> src_col;
  std::vector<double> src_row;

  friend bool operator==(const SampleGrid&, const SampleGrid&) = default;
};

/// Evaluates `pixel_map(PixelPoint) -> PixelPoint` at every output pixel.
template <class PixelMap>
SampleGrid build_grid(int width, int height, PixelMap&& pixel_map, int jobs = 1) {
  SampleGrid grid{width, height, {}, {}};
  const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  grid.src_col.resize(n);
  grid.src_row.resize(n);
  parallel_for(static_cast<std::size_t>(height), jobs, [&](std::size_t row) {
    for (int col = 0; col < width; ++col) {
      const PixelPoint src = pixel_map(PixelPoint{static_cast<double>(col),
                                                  static_cast<double>(row)});
      const std::size_t i = row * static_cast<std::size_t>(width) + static_cast<std::size_t>(col);
      grid.src_col[i] = src.col;
      grid.src_row[i] = src.row;
    }
  });
  return grid;
}

/// Same as build_grid but the map works in normalized coordinates.
template <class NormMap>
SampleGrid build_norm_grid(int width, int height, NormMap&& norm_map, int jobs = 1) {
  return build_grid(
      width, height,
      [&](PixelPoint p) { return to_pixel(norm_map(to_norm(p, width, height)), width, height); },
      jobs);
}

/// output(p) = bilinear(img, grid(p)); grid must match the image size.
GrayImage resample(const GrayImage& img, const SampleGrid& grid, int jobs = 1);

/// 64-bit digest of a grid's coordinates, for cheap equality checks.
std::uint64_t fingerprint(const SampleGrid& grid);

} // namespace inkwarp
