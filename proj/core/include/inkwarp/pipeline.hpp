#pragma once

#include "inkwarp/image.hpp"
#include "inkwarp/manifest.hpp"
#include "inkwarp/plan.hpp"
#include "inkwarp/transform.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace inkwarp {

enum class Direction { AtoB, BtoC, AtoC };

/// "ab", "bc", "ac" -- also the dataset subdirectory name.
std::string_view to_string(Direction d);
Direction parse_direction(std::string_view s);

/// Result of pushing one tuple through one chain.
struct TransformedStages {
  StageImages images;
  /// One fingerprint per present stage (A, B, C) of the sample grid that
  /// produced it.
  std::vector<std::uint64_t> grid_fingerprints;
};

/// Evaluates the chain once and resamples every stage with the same grid.
TransformedStages transform_stages(const Transform& chain, const StageImages& originals,
                                   int jobs = 1);

struct MaterializeResult {
  ManifestEntry row;
  std::vector<std::uint64_t> grid_fingerprints;
};

/// Applies the entry's chain to every stage, writes
/// `<out_dir>/stages/<example_id>_<S>.png` and returns the manifest row
/// (status auto). Throws InvalidSpec, IoError.
MaterializeResult materialize(const PlanEntry& entry, const StageImages& originals,
                              const std::filesystem::path& out_dir, double split_ratio,
                              int jobs = 1);

struct SplitCounts {
  std::size_t train = 0;
  std::size_t val = 0;
  std::size_t total() const noexcept { return train + val; }
};

/// Writes `<out_dir>/<ab|bc|ac>/<train|val>/<example_id>.png` combined
/// images (left = input stage, right = target stage) for every usable row.
/// Stage paths resolve against `manifest_dir`. The direction directory is
/// recreated from scratch. Throws MissingStage, EmptyAfterCuration, IoError.
SplitCounts assemble(const DatasetManifest& manifest, const std::filesystem::path& manifest_dir,
                     Direction direction, double split_ratio,
                     const std::filesystem::path& out_dir, int jobs = 1);

struct ContactSheets {
  std::vector<GrayImage> pages;
  /// Tab-separated: page file, row, col, example_id, status.
  std::vector<std::string> index_lines;
};

/// Tiles the final stage of every entry, ordered by example_id, cols x rows
/// per page, one canonical-size cell per entry with a light gray frame.
ContactSheets contact_sheet(const DatasetManifest& manifest,
                            const std::filesystem::path& manifest_dir, int cols, int rows,
                            int canvas_size);

/// Writes sheet_NNN.png and sheet_index.txt into `dir` (recreated).
void write_contact_sheets(const ContactSheets& sheets, const std::filesystem::path& dir);

struct DatasetReport {
  std::size_t originals = 0;
  std::size_t planned = 0;
  std::size_t accepted = 0; // usable rows after curation
  std::size_t rejected = 0;
  std::map<std::string, SplitCounts> directions;
  std::size_t sheet_pages = 0;
};

/// Full run: load originals, expand, materialize, curate, assemble, sheets.
/// Output bytes do not depend on `jobs`.
DatasetReport run_dataset(const DatasetConfig& config, const std::filesystem::path& out_dir,
                          int jobs = 1, std::ostream* log = nullptr);

} // namespace inkwarp
