#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace inkwarp {

/// Luminance below this value counts as ink. 0 is ink, 255 is paper.
inline constexpr std::uint8_t kInkThreshold = 128;
inline constexpr std::uint8_t kPaperWhite = 255;

/// 8-bit single-channel raster, row-major, row 0 at the top.
class GrayImage {
public:
  GrayImage() = default;
  GrayImage(int width, int height, std::uint8_t fill = kPaperWhite);
  GrayImage(int width, int height, std::vector<std::uint8_t> pixels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }
  bool empty() const noexcept { return pixels_.empty(); }
  bool is_square() const noexcept { return width_ == height_; }

  std::uint8_t at(int x, int y) const { return pixels_[index(x, y)]; }
  std::uint8_t& at(int x, int y) { return pixels_[index(x, y)]; }

  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
  std::span<std::uint8_t> pixels() noexcept { return pixels_; }
  std::span<const std::uint8_t> row(int y) const;

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

enum class Resample { Nearest, Bilinear };

struct CanvasPolicy {
  int target_size = 256;
  std::uint8_t pad_value = kPaperWhite;
  Resample resample = Resample::Bilinear;
};

/// Uniformly scales `img` to fit a target_size square, centers it and pads
/// the remainder with pad_value. A square input already at target size is
/// returned unchanged.
GrayImage canonicalize(const GrayImage& img, const CanvasPolicy& policy = {});

/// Number of pixels with luminance below kInkThreshold.
std::size_t ink_count(const GrayImage& img);
double ink_ratio(const GrayImage& img);

/// Mean (x, y) pixel position of ink; returns false when there is no ink.
bool ink_centroid(const GrayImage& img, double& cx, double& cy);

/// Number of positions where the two images differ. Sizes must match.
std::size_t count_differences(const GrayImage& a, const GrayImage& b);

GrayImage invert(const GrayImage& img);

/// Paints a `width`-pixel border of `value` around the image edge.
GrayImage add_frame(const GrayImage& img, int width, std::uint8_t value = 0);

/// `left` and `right` placed side by side; heights must match.
GrayImage hconcat(const GrayImage& left, const GrayImage& right);

/// Copies the `w` x `h` block at (x0, y0).
GrayImage crop(const GrayImage& img, int x0, int y0, int w, int h);

/// Peak signal-to-noise ratio in dB; +inf for identical images.
double psnr(const GrayImage& a, const GrayImage& b);

} // namespace inkwarp
