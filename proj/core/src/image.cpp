#include "inkwarp/image.hpp"

#include "inkwarp/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace inkwarp {

GrayImage::GrayImage(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
  if (width < 1 || height < 1)
    throw Error("GrayImage: dimensions must be positive, got " +
                std::to_string(width) + "x" + std::to_string(height));
  pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width < 1 || height < 1)
    throw Error("GrayImage: dimensions must be positive");
  if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
    throw Error("GrayImage: pixel count does not match width*height");
}

std::span<const std::uint8_t> GrayImage::row(int y) const {
  return std::span<const std::uint8_t>(pixels_).subspan(index(0, y),
                                                        static_cast<std::size_t>(width_));
}

namespace {

// Rounded integer scaling: round(n * num / den) for non-negative inputs.
int scaled(int n, int num, int den) {
  const long long v = (2LL * n * num + den) / (2LL * den);
  return static_cast<int>(std::max<long long>(1, v));
}

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

GrayImage resize(const GrayImage& src, int out_w, int out_h, Resample mode) {
  if (out_w == src.width() && out_h == src.height())
    return src;

  GrayImage out(out_w, out_h);
  const double fx = static_cast<double>(src.width()) / out_w;
  const double fy = static_cast<double>(src.height()) / out_h;
  const int max_x = src.width() - 1;
  const int max_y = src.height() - 1;

  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      if (mode == Resample::Nearest) {
        const int sx = std::min(max_x, static_cast<int>((x + 0.5) * fx));
        const int sy = std::min(max_y, static_cast<int>((y + 0.5) * fy));
        out.at(x, y) = src.at(sx, sy);
        continue;
      }
      const double sx = std::clamp((x + 0.5) * fx - 0.5, 0.0, static_cast<double>(max_x));
      const double sy = std::clamp((y + 0.5) * fy - 0.5, 0.0, static_cast<double>(max_y));
      const int x0 = static_cast<int>(sx);
      const int y0 = static_cast<int>(sy);
      const int x1 = std::min(x0 + 1, max_x);
      const int y1 = std::min(y0 + 1, max_y);
      const double tx = sx - x0;
      const double ty = sy - y0;
      const double a = src.at(x0, y0), b = src.at(x1, y0);
      const double c = src.at(x0, y1), d = src.at(x1, y1);
      const double top = a + (b - a) * tx;
      const double bottom = c + (d - c) * tx;
      out.at(x, y) = to_byte(top + (bottom - top) * ty);
    }
  }
  return out;
}

} // namespace

GrayImage canonicalize(const GrayImage& img, const CanvasPolicy& policy) {
  if (policy.target_size < 16)
    throw Error("CanvasPolicy: target_size must be >= 16");
  const int target = policy.target_size;
  if (img.width() == target && img.height() == target)
    return img;

  int sw = target;
  int sh = target;
  if (img.width() >= img.height())
    sh = std::min(target, scaled(img.height(), target, img.width()));
  else
    sw = std::min(target, scaled(img.width(), target, img.height()));

  const GrayImage scaled_img = resize(img, sw, sh, policy.resample);
  GrayImage out(target, target, policy.pad_value);
  const int ox = (target - sw) / 2;
  const int oy = (target - sh) / 2;
  for (int y = 0; y < sh; ++y) {
    const auto src = scaled_img.row(y);
    std::copy(src.begin(), src.end(), &out.at(ox, oy + y));
  }
  return out;
}

std::size_t ink_count(const GrayImage& img) {
  const auto px = img.pixels();
  return static_cast<std::size_t>(
      std::count_if(px.begin(), px.end(), [](std::uint8_t v) { return v < kInkThreshold; }));
}

double ink_ratio(const GrayImage& img) {
  if (img.empty())
    return 0.0;
  return static_cast<double>(ink_count(img)) / static_cast<double>(img.size());
}

bool ink_centroid(const GrayImage& img, double& cx, double& cy) {
  double sx = 0, sy = 0;
  std::size_t n = 0;
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      if (img.at(x, y) < kInkThreshold) {
        sx += x;
        sy += y;
        ++n;
      }
  if (n == 0)
    return false;
  cx = sx / static_cast<double>(n);
  cy = sy / static_cast<double>(n);
  return true;
}

std::size_t count_differences(const GrayImage& a, const GrayImage& b) {
  if (a.width() != b.width() || a.height() != b.height())
    throw Error("count_differences: size mismatch");
  std::size_t n = 0;
  const auto pa = a.pixels();
  const auto pb = b.pixels();
  for (std::size_t i = 0; i < pa.size(); ++i)
    n += pa[i] != pb[i];
  return n;
}

GrayImage invert(const GrayImage& img) {
  GrayImage out = img;
  for (auto& v : out.pixels())
    v = static_cast<std::uint8_t>(255 - v);
  return out;
}

GrayImage add_frame(const GrayImage& img, int width, std::uint8_t value) {
  if (width < 0)
    throw Error("add_frame: negative width");
  GrayImage out = img;
  for (int y = 0; y < out.height(); ++y)
    for (int x = 0; x < out.width(); ++x)
      if (x < width || y < width || x >= out.width() - width || y >= out.height() - width)
        out.at(x, y) = value;
  return out;
}

GrayImage hconcat(const GrayImage& left, const GrayImage& right) {
  if (left.height() != right.height())
    throw Error("hconcat: heights differ");
  GrayImage out(left.width() + right.width(), left.height());
  for (int y = 0; y < left.height(); ++y) {
    const auto l = left.row(y);
    const auto r = right.row(y);
    std::copy(l.begin(), l.end(), &out.at(0, y));
    std::copy(r.begin(), r.end(), &out.at(left.width(), y));
  }
  return out;
}

GrayImage crop(const GrayImage& img, int x0, int y0, int w, int h) {
  if (x0 < 0 || y0 < 0 || x0 + w > img.width() || y0 + h > img.height())
    throw Error("crop: region outside image");
  GrayImage out(w, h);
  for (int y = 0; y < h; ++y) {
    const auto src = img.row(y0 + y).subspan(static_cast<std::size_t>(x0),
                                            static_cast<std::size_t>(w));
    std::copy(src.begin(), src.end(), &out.at(0, y));
  }
  return out;
}

double psnr(const GrayImage& a, const GrayImage& b) {
  if (a.width() != b.width() || a.height() != b.height())
    throw Error("psnr: size mismatch");
  double se = 0;
  const auto pa = a.pixels();
  const auto pb = b.pixels();
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const double d = static_cast<double>(pa[i]) - pb[i];
    se += d * d;
  }
  if (se == 0)
    return std::numeric_limits<double>::infinity();
  const double mse = se / static_cast<double>(pa.size());
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

} // namespace inkwarp
