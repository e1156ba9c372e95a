#pragma once

#include "inkwarp/image.hpp"

#include <array>
#include <cstdint>

namespace inkwarp {

struct OtsuResult {
  std::uint8_t threshold = 0;
  double between_class_variance = 0.0;

  friend bool operator==(const OtsuResult&, const OtsuResult&) = default;
};

/// Default blur before thresholding at 256x256.
inline constexpr double kDefaultBinarizeSigma = 1.0;

/// Separable Gaussian, radius ceil(3 sigma), edge clamp. Throws InvalidSigma
/// unless sigma > 0.
GrayImage gaussian_blur(const GrayImage& img, double sigma);

std::array<std::uint64_t, 256> histogram(const GrayImage& img);

/// Otsu's method over all 256 cuts, class 0 = {v <= t}. Ties go to the
/// lowest t; a single-level image returns that level with variance 0.
OtsuResult otsu_threshold(const GrayImage& img);
OtsuResult otsu_threshold(const std::array<std::uint64_t, 256>& hist);

/// Blur (sigma > 0) then Otsu: v <= t becomes 0, the rest 255. A
/// single-level image maps to pure paper or pure ink by the 128 ink cut.
GrayImage binarize(const GrayImage& img, double sigma = kDefaultBinarizeSigma);

} // namespace inkwarp
