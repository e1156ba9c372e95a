#pragma once

#include "inkwarp/image.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace inkwarp {

/// An external per-stage model: a command line with exactly one `{in}` and
/// one `{out}` placeholder, each substituted with a PNG path.
struct StageCommand {
  std::string name;
  std::string command;
  double timeout_s = 600.0;
};

/// Throws Error if the template is malformed.
void validate(const StageCommand& cmd);

/// Runs one stage on `input`, writing `output` (plus `<output>.log`).
/// Throws SpawnError, Timeout, BadOutput (non-zero exit, missing or
/// undecodable output, or not canvas_size x canvas_size).
std::filesystem::path run_stage(const StageCommand& cmd, const std::filesystem::path& input,
                                const std::filesystem::path& output, int canvas_size = 256);

/// Pixel rectangle [x0, x1) x [y0, y1) for region ink metrics.
struct Region {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
};

struct ChainConfig {
  std::vector<StageCommand> stages;
  std::optional<StageCommand> oneshot;
  std::vector<std::filesystem::path> inputs;
  /// Target images, matched to inputs by file name.
  std::optional<std::filesystem::path> targets_dir;
  std::optional<Region> region;
  std::filesystem::path work_dir = "chain_out";
  int canvas_size = 256;
  int jobs = 1;
};

/// Keys: stages[{name, command, timeout_s}], oneshot{...}, inputs[] or
/// inputs_dir, targets_dir, region{x0,y0,x1,y1}, work_dir, canvas_size, jobs.
/// Relative paths resolve against `base_dir`. Throws Error.
ChainConfig chain_config_from_json(const nlohmann::json& j,
                                   const std::filesystem::path& base_dir);
ChainConfig load_chain_config(const std::filesystem::path& path);
nlohmann::json to_json(const ChainConfig& config);

struct ChainMetrics {
  std::optional<double> ink_ratio_chained;
  std::optional<double> ink_ratio_oneshot;
  /// |ink(out) - ink(target)| / canvas
  std::optional<double> delta_ink_vs_target;
  std::optional<double> delta_ink_vs_target_oneshot;
  /// Fraction of matching pixels after binarize(sigma = 0), chained vs target.
  std::optional<double> pixel_agreement;
  std::optional<double> pixel_agreement_oneshot;
  std::optional<double> chained_vs_oneshot_agreement;
  std::optional<double> region_ink_chained;
  std::optional<double> region_ink_oneshot;
};

struct ChainRecord {
  std::string input_id;
  std::filesystem::path input;
  std::vector<std::filesystem::path> intermediates; // one per stage; last is the chained output
  std::optional<std::filesystem::path> chained_output;
  std::optional<std::filesystem::path> oneshot_output;
  std::optional<std::filesystem::path> target;
  ChainMetrics metrics;
  /// Empty on success; otherwise "spawn", "timeout", "bad_output" or "io".
  std::string error_kind;
  std::string error;

  bool ok() const noexcept { return error_kind.empty(); }
};

struct ChainReport {
  std::vector<ChainRecord> records; // sorted by input_id

  std::size_t failures() const;
  bool any_spawn_error() const;
  std::string summary_table() const;
};

/// Fraction of equal pixels after binarize(sigma = 0). Symmetric.
double pixel_agreement(const GrayImage& a, const GrayImage& b);

/// Feeds every input through the stages in order (inputs in parallel up to
/// config.jobs, stages sequential). Per-input failures are recorded, never
/// thrown. Intermediates live under `<work_dir>/<input_id>/`.
ChainReport run_chain(const ChainConfig& config);

nlohmann::json to_json(const ChainRecord& record);

/// `<work_dir>/chain_report.jsonl` and `<work_dir>/chain_summary.txt`.
void write_chain_report(const ChainReport& report, const std::filesystem::path& work_dir);

} // namespace inkwarp
