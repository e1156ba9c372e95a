#pragma once

#include "inkwarp/elastic.hpp"
#include "inkwarp/image.hpp"
#include "inkwarp/sampling.hpp"
#include "inkwarp/warp.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace inkwarp {

using TransformStep = std::variant<WarpSpec, ElasticSpec>;

/// A concrete augmentation chain: geometric warps and elastic deformations
/// in forward order (steps[0] touches the image first). Evaluated as one
/// backward map so each output pixel is interpolated exactly once.
struct Transform {
  std::vector<TransformStep> steps;

  static Transform identity() { return Transform{{WarpSpec::identity()}}; }

  friend bool operator==(const Transform&, const Transform&) = default;
};

/// Accepts the warp grammar plus `elastic(...)` leaves; nested compose
/// blocks are flattened. Elastic leaves without `seed=` get `default_seed`.
Transform parse_transform(std::string_view text, std::uint64_t default_seed = 0);

/// Single step prints as itself, several as `compose[a;b;...]`.
std::string to_string(const Transform& t);

/// Backward map of a transform bound to one canvas size. Elastic fields are
/// generated once at construction; every later evaluation is a pure lookup,
/// so one sampler can serve all stages of a tuple.
class TransformSampler {
public:
  TransformSampler(const Transform& t, int width, int height, int jobs = 1);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  /// Source point for an output point.
  NormPoint operator()(NormPoint p) const;

  /// Source coordinates for every output pixel.
  SampleGrid grid(int jobs = 1) const;

private:
  struct Step {
    std::optional<SampleMap> warp;
    std::optional<DisplacementField> field;
  };

  int width_;
  int height_;
  std::vector<Step> steps_; // forward order
};

/// Applies the chain to a square image.
GrayImage apply_transform(const GrayImage& img, const Transform& t, int jobs = 1);

} // namespace inkwarp
