#pragma once

#include "inkwarp/image.hpp"
#include "inkwarp/sampling.hpp"
#include "inkwarp/spec_text.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace inkwarp {

/// Smoothed random displacement: uniform noise in [-1, 1] per pixel and per
/// axis, blurred with a Gaussian of std-dev `sigma`, rescaled so its largest
/// magnitude is 1, then multiplied by `alpha`. alpha is therefore the
/// maximum displacement in pixels.
struct ElasticSpec {
  double alpha = 8.0;
  double sigma = 16.0;
  std::uint64_t seed = 0;

  friend bool operator==(const ElasticSpec&, const ElasticSpec&) = default;
};

/// Small local changes in line character.
inline constexpr ElasticSpec kElasticLinePreset{8.0, 16.0, 0};
/// Larger limb/shape changes.
inline constexpr ElasticSpec kElasticShapePreset{16.0, 32.0, 0};

/// Throws InvalidSpec unless alpha >= 0 and sigma > 0.5 (both finite).
void validate(const ElasticSpec& spec);

struct DisplacementField {
  int width = 0;
  int height = 0;
  std::vector<double> dx;
  std::vector<double> dy;

  double dx_at(int x, int y) const { return dx[index(x, y)]; }
  double dy_at(int x, int y) const { return dy[index(x, y)]; }

  /// Bilinear lookup at pixel-center coordinates, edge-clamped.
  PixelPoint at(double col, double row) const;

  friend bool operator==(const DisplacementField&, const DisplacementField&) = default;

private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
           static_cast<std::size_t>(x);
  }
};

/// Raw noise value for (seed, pixel index, axis) in [-1, 1). Axis 0 is dx,
/// axis 1 is dy. Exposed so tests can rebuild fields independently.
double elastic_noise(std::uint64_t seed, std::uint64_t pixel_index, int axis);

/// Normalized Gaussian taps for radius ceil(3 sigma); size 2r+1.
std::vector<double> gaussian_kernel(double sigma);

/// Deterministic in (w, h, spec); the result does not depend on `jobs`.
DisplacementField generate_field(int width, int height, const ElasticSpec& spec, int jobs = 1);

/// output(p) = bilinear(img, p + d(p)), white outside. alpha == 0 returns an
/// identical image.
GrayImage apply_elastic(const GrayImage& img, const ElasticSpec& spec, int jobs = 1);

/// Minimum of det(I + J) over interior pixels, J the central-difference
/// Jacobian of the field. Positive means locally injective. Fields smaller
/// than 3 pixels along an axis use clamped differences over all pixels.
double jacobian_min(const DisplacementField& field);

/// `elastic(alpha=8,sigma=16,seed=12345)`
std::string to_string(const ElasticSpec& spec);
/// `seed` may be omitted in the text, in which case `default_seed` is used.
ElasticSpec parse_elastic(std::string_view text, std::uint64_t default_seed = 0);
ElasticSpec elastic_from_call(const text::Call& call, std::uint64_t default_seed = 0);

} // namespace inkwarp
