#pragma once

#include "inkwarp/image.hpp"
#include "inkwarp/sampling.hpp"
#include "inkwarp/spec_text.hpp"

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace inkwarp {

/// Where an engineered map is allowed to act. Disk leaves every point with
/// radius > 1 untouched; Square applies the map everywhere.
enum class DomainMode { Disk, Square };

// Engineered homeomorphisms, all written as backward (output -> source) maps.

/// (x, y) -> (x|x|, y)
struct XStretch {
  friend bool operator==(const XStretch&, const XStretch&) = default;
};
/// (x, y) -> (x, y|y|)
struct YStretch {
  friend bool operator==(const YStretch&, const YStretch&) = default;
};
/// (x, y) -> (x * sqrt(x^2 + y^2), y)
struct Spherical {
  friend bool operator==(const Spherical&, const Spherical&) = default;
};
/// polar (r, theta) -> (r^p, theta)
struct Daisy {
  double exponent = 3.0;
  friend bool operator==(const Daisy&, const Daisy&) = default;
};

/// Forward map: scale, then flip, then rotate counter-clockwise by
/// `rotation` radians (y up), then translate. Sampling uses its inverse.
struct Affine {
  double rotation = 0.0;
  double scale_x = 1.0;
  double scale_y = 1.0;
  double translate_x = 0.0;
  double translate_y = 0.0;
  bool flip_x = false;
  bool flip_y = false;
  friend bool operator==(const Affine&, const Affine&) = default;
};

/// Forward shear (x + shear_x * y, y + shear_y * x).
struct Skew {
  double shear_x = 0.0;
  double shear_y = 0.0;
  friend bool operator==(const Skew&, const Skew&) = default;
};

struct WarpSpec;

/// Forward order: steps[0] is applied to the image first.
struct Compose {
  std::vector<WarpSpec> steps;
  friend bool operator==(const Compose&, const Compose&);
};

struct WarpSpec {
  using Kind = std::variant<XStretch, YStretch, Spherical, Daisy, Affine, Skew, Compose>;

  Kind kind = Affine{};
  DomainMode domain = DomainMode::Square;

  WarpSpec() = default;
  /// Uses the kind's default domain: Disk for the engineered maps, Square
  /// otherwise.
  WarpSpec(Kind k);
  WarpSpec(Kind k, DomainMode d) : kind(std::move(k)), domain(d) {}

  static WarpSpec identity() { return WarpSpec(Affine{}); }

  friend bool operator==(const WarpSpec&, const WarpSpec&) = default;
};

DomainMode default_domain(const WarpSpec::Kind& kind);

/// Throws InvalidSpec on non-finite parameters, non-positive scale or daisy
/// exponent, singular skew, or an empty compose.
void validate(const WarpSpec& spec);

/// Backward sampling map of a validated spec, with disk gating and clamping
/// of each leaf's source to [-1, 1]^2. Compose([w1..wn]) evaluates
/// s_w1(s_w2(...s_wn(p))).
class SampleMap {
public:
  explicit SampleMap(const WarpSpec& spec);
  NormPoint operator()(NormPoint p) const;

  struct Leaf; // flattened, precomputed leaf step

private:
  std::vector<Leaf> leaves_; // in evaluation (output -> source) order
};

struct SampleMap::Leaf {
  enum class Op { XStretch, YStretch, Spherical, Daisy, Linear } op;
  bool disk = false;
  double exponent = 1.0;
  // Linear: src = M * (p - t)
  double m00 = 1, m01 = 0, m10 = 0, m11 = 1, tx = 0, ty = 0;
};

SampleMap sample_map(const WarpSpec& spec);

NormPoint warp_point(const WarpSpec& spec, NormPoint p);

/// Backward warp of a square image. Throws InvalidSpec, NonSquareInput.
GrayImage apply_warp(const GrayImage& img, const WarpSpec& spec, int jobs = 1);

/// Canonical text form, e.g. `xstretch()`, `daisy(p=3)`,
/// `compose[affine(rot=0.1,sx=1,sy=1,tx=0,ty=0,flipx=false,flipy=false);spherical()]`.
std::string to_string(const WarpSpec& spec);

/// Inverse of to_string. Throws InvalidSpec naming the bad token.
WarpSpec parse_warp(std::string_view text);

/// Builds a spec from an already-parsed call (no elastic steps).
WarpSpec warp_from_call(const text::Call& call);

/// True if `name` is one of the geometric transform names.
bool is_warp_name(std::string_view name);

} // namespace inkwarp
