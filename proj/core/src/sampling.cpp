#include "inkwarp/sampling.hpp"

#include "inkwarp/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace inkwarp {

double sample_bilinear(const GrayImage& img, double col, double row) {
  const double fc = std::floor(col);
  const double fr = std::floor(row);
  const double tx = col - fc;
  const double ty = row - fr;
  // Far outside: everything reads white. Also keeps the int casts in range.
  if (fc < -1.0 || fr < -1.0 || fc > img.width() || fr > img.height())
    return kPaperWhite;
  const int x0 = static_cast<int>(fc);
  const int y0 = static_cast<int>(fr);
  auto fetch = [&](int x, int y) -> double {
    if (x < 0 || y < 0 || x >= img.width() || y >= img.height())
      return kPaperWhite;
    return img.at(x, y);
  };
  const double a = fetch(x0, y0);
  const double b = fetch(x0 + 1, y0);
  const double c = fetch(x0, y0 + 1);
  const double d = fetch(x0 + 1, y0 + 1);
  const double top = a + (b - a) * tx;
  const double bottom = c + (d - c) * tx;
  return top + (bottom - top) * ty;
}

GrayImage resample(const GrayImage& img, const SampleGrid& grid, int jobs) {
  if (grid.width != img.width() || grid.height != img.height())
    throw Error("resample: grid is " + std::to_string(grid.width) + "x" +
                std::to_string(grid.height) + " but image is " + std::to_string(img.width()) +
                "x" + std::to_string(img.height()));
  GrayImage out(img.width(), img.height());
  const std::size_t w = static_cast<std::size_t>(img.width());
  parallel_for(static_cast<std::size_t>(img.height()), jobs, [&](std::size_t row) {
    for (std::size_t col = 0; col < w; ++col) {
      const std::size_t i = row * w + col;
      const double v = sample_bilinear(img, grid.src_col[i], grid.src_row[i]);
      out.at(static_cast<int>(col), static_cast<int>(row)) =
          static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    }
  });
  return out;
}

std::uint64_t fingerprint(const SampleGrid& grid) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  auto feed = [&h](const void* data, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 0x100000001B3ULL;
    }
  };
  feed(&grid.width, sizeof grid.width);
  feed(&grid.height, sizeof grid.height);
  feed(grid.src_col.data(), grid.src_col.size() * sizeof(double));
  feed(grid.src_row.data(), grid.src_row.size() * sizeof(double));
  return h;
}

} // namespace inkwarp
