#pragma once

#include "inkwarp/elastic.hpp"
#include "inkwarp/image.hpp"
#include "inkwarp/random.hpp"
#include "inkwarp/transform.hpp"
#include "inkwarp/warp.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace inkwarp {

/// One original drawing saved at its temporal stages: A (base form),
/// B = A + detail, optional C = B + more detail.
struct StageTuple {
  std::string id;
  std::filesystem::path stage_a;
  std::filesystem::path stage_b;
  std::optional<std::filesystem::path> stage_c;

  bool has_c() const noexcept { return stage_c.has_value(); }
};

/// Canonicalized pixels of a StageTuple.
struct StageImages {
  GrayImage a;
  GrayImage b;
  std::optional<GrayImage> c;

  std::size_t stage_count() const noexcept { return c ? 3 : 2; }
};

/// Ink may shrink by at most this fraction of the canvas from one stage to
/// the next (resampling noise).
inline constexpr double kStageInkTolerance = 0.02;

/// Loads and canonicalizes every stage, then checks equal dimensions and
/// ink(A) <= ink(B) <= ink(C) within kStageInkTolerance. Throws PlanError.
StageImages load_stage_images(const StageTuple& tuple, const CanvasPolicy& canvas);

/// True if ink is monotone across stages within the tolerance.
bool stage_ink_monotone(const StageImages& images);

/// Finds `<id>_A.png`, `<id>_B.png` and optional `<id>_C.png` in `dir`
/// (suffix letter case-insensitive), sorted by id. Throws PlanError.
std::vector<StageTuple> discover_tuples(const std::filesystem::path& dir);

struct Range {
  double lo = 0.0;
  double hi = 0.0;

  double sample(SplitMix64& rng) const { return lo == hi ? lo : rng.uniform(lo, hi); }
};

/// Random affine perturbation. scale_x = scale * aspect, scale_y = scale / aspect.
struct AffineFamily {
  Range rotation{-0.08, 0.08};
  Range scale{0.92, 1.06};
  Range aspect{0.96, 1.04};
  Range translate_x{-0.05, 0.05};
  Range translate_y{-0.05, 0.05};
  double flip_x_probability = 0.5;
  double flip_y_probability = 0.0;
};

struct SkewFamily {
  Range shear_x{-0.15, 0.15};
  Range shear_y{0.0, 0.0};
};

/// Exactly one choice per entry; nullopt means "no homeomorphism".
struct HomeomorphismFamily {
  std::vector<std::optional<WarpSpec>> choices;
};

/// Exactly one choice per entry; each choice is zero or more elastic specs
/// whose seeds are replaced per entry.
struct ElasticFamily {
  std::vector<std::vector<ElasticSpec>> choices;
};

using Family = std::variant<AffineFamily, SkewFamily, HomeomorphismFamily, ElasticFamily>;

struct AugmentationPlan {
  std::uint64_t master_seed = 0;
  int per_original = 72;
  bool include_identity = true;
  double split_ratio = 0.9;
  CanvasPolicy canvas;
  /// Chain steps follow this order.
  std::vector<Family> families;
};

/// per_original = 72: 8 affine draws x {none, xstretch, ystretch} x
/// {no elastic, line preset, shape preset}.
AugmentationPlan default_plan();

/// Throws PlanError on invalid counts, ranges, or empty families.
void validate(const AugmentationPlan& plan);

/// One concrete augmentation of one original.
struct PlanEntry {
  std::string example_id;
  std::string source_id;
  int variant = 0;
  Transform chain;
  std::uint64_t seed = 0;
};

std::string make_example_id(const std::string& source_id, int variant);

/// Deterministic expansion: per_original entries per original, in original
/// order then variant order. Discrete families (homeomorphism, elastic) are
/// stratified by variant index with the first discrete family varying
/// fastest; continuous parameters come from the entry seed. Variant 0 is the
/// identity when include_identity is set. Throws PlanError (an empty
/// originals list is an EmptyPlan error).
std::vector<PlanEntry> expand_plan(const AugmentationPlan& plan,
                                   const std::vector<StageTuple>& originals);

/// Plan and dataset settings from a JSON config file.
struct DatasetConfig {
  AugmentationPlan plan;
  std::vector<StageTuple> originals;
  /// Subset of "ab", "bc", "ac". Empty means every direction the originals
  /// support.
  std::vector<std::string> directions;
  std::optional<std::filesystem::path> accept_list;
  std::optional<std::filesystem::path> reject_list;
  int sheet_cols = 4;
  int sheet_rows = 4;
};

/// Relative paths inside the config resolve against its directory.
/// Throws PlanError on unknown keys or bad values, IoError if unreadable.
DatasetConfig load_dataset_config(const std::filesystem::path& path);
DatasetConfig dataset_config_from_json(const nlohmann::json& j,
                                       const std::filesystem::path& base_dir);
nlohmann::json to_json(const DatasetConfig& config);

} // namespace inkwarp
