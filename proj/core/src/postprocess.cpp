#include "inkwarp/postprocess.hpp"

#include "inkwarp/elastic.hpp"
#include "inkwarp/error.hpp"

#include <algorithm>
#include <cmath>

namespace inkwarp {

GrayImage gaussian_blur(const GrayImage& img, double sigma) {
  if (!std::isfinite(sigma) || sigma <= 0)
    throw InvalidSigma("gaussian_blur: sigma must be > 0");
  const auto kernel = gaussian_kernel(sigma);
  const int r = static_cast<int>(kernel.size() / 2);
  const int w = img.width(), h = img.height();

  std::vector<double> tmp(img.size());
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0;
      for (int k = -r; k <= r; ++k)
        acc += kernel[static_cast<std::size_t>(k + r)] * img.at(std::clamp(x + k, 0, w - 1), y);
      tmp[static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x)] = acc;
    }

  GrayImage out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0;
      for (int k = -r; k <= r; ++k) {
        const int yy = std::clamp(y + k, 0, h - 1);
        acc += kernel[static_cast<std::size_t>(k + r)] *
               tmp[static_cast<std::size_t>(yy) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x)];
      }
      out.at(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(acc), 0L, 255L));
    }
  return out;
}

std::array<std::uint64_t, 256> histogram(const GrayImage& img) {
  std::array<std::uint64_t, 256> hist{};
  for (const std::uint8_t v : img.pixels())
    ++hist[v];
  return hist;
}

OtsuResult otsu_threshold(const std::array<std::uint64_t, 256>& hist) {
  std::uint64_t total = 0;
  std::uint64_t total_sum = 0;
  int levels = 0;
  int only_level = 0;
  for (int v = 0; v < 256; ++v) {
    total += hist[static_cast<std::size_t>(v)];
    total_sum += hist[static_cast<std::size_t>(v)] * static_cast<std::uint64_t>(v);
    if (hist[static_cast<std::size_t>(v)] != 0) {
      ++levels;
      only_level = v;
    }
  }
  if (total == 0)
    throw Error("otsu_threshold: empty image");
  if (levels == 1)
    return {static_cast<std::uint8_t>(only_level), 0.0};

  const double n = static_cast<double>(total);
  OtsuResult best{0, -1.0};
  std::uint64_t n0 = 0;
  std::uint64_t s0 = 0;
  for (int t = 0; t < 256; ++t) {
    n0 += hist[static_cast<std::size_t>(t)];
    s0 += hist[static_cast<std::size_t>(t)] * static_cast<std::uint64_t>(t);
    const std::uint64_t n1 = total - n0;
    double variance = 0.0;
    if (n0 != 0 && n1 != 0) {
      const double w0 = static_cast<double>(n0) / n;
      const double w1 = static_cast<double>(n1) / n;
      const double mu0 = static_cast<double>(s0) / static_cast<double>(n0);
      const double mu1 = static_cast<double>(total_sum - s0) / static_cast<double>(n1);
      variance = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
    }
    if (variance > best.between_class_variance)
      best = {static_cast<std::uint8_t>(t), variance};
  }
  return best;
}

OtsuResult otsu_threshold(const GrayImage& img) {
  return otsu_threshold(histogram(img));
}

GrayImage binarize(const GrayImage& img, double sigma) {
  if (!std::isfinite(sigma) || sigma < 0)
    throw InvalidSigma("binarize: sigma must be >= 0");
  const GrayImage src = sigma > 0 ? gaussian_blur(img, sigma) : img;
  const auto hist = histogram(src);
  const OtsuResult otsu = otsu_threshold(hist);
  const bool single_level = otsu.between_class_variance == 0.0 &&
                            hist[otsu.threshold] == src.size();

  GrayImage out(src.width(), src.height());
  auto px = out.pixels();
  const auto in = src.pixels();
  for (std::size_t i = 0; i < in.size(); ++i) {
    const bool ink = single_level ? in[i] < kInkThreshold : in[i] <= otsu.threshold;
    px[i] = ink ? 0 : 255;
  }
  return out;
}

} // namespace inkwarp
