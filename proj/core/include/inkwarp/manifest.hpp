#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace inkwarp {

enum class Split { Train, Val };
enum class Status { Accepted, Rejected, Auto };

std::string_view to_string(Split s);
std::string_view to_string(Status s);

/// Hash-based split: depends only on the id and the ratio, so adding
/// entries never moves existing ones.
Split split_for(std::string_view example_id, double train_ratio);

struct ManifestEntry {
  std::string example_id;
  std::string source_id;
  std::string transform_chain;
  std::uint64_t seed = 0;
  Split split = Split::Train;
  /// Stage letter ("A", "B", "C") -> path relative to the manifest directory.
  std::map<std::string, std::string> outputs;
  Status status = Status::Auto;

  bool usable() const noexcept { return status != Status::Rejected; }

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

/// Entries are kept sorted by example_id; ids are unique.
struct DatasetManifest {
  std::vector<ManifestEntry> entries;

  const ManifestEntry* find(std::string_view example_id) const;
  std::size_t count(Status s) const;
  std::size_t usable_count() const;

  /// Sorts by id; throws Error on duplicate ids.
  void normalize();

  friend bool operator==(const DatasetManifest&, const DatasetManifest&) = default;
};

/// One JSON object per line with sorted keys.
std::string serialize(const DatasetManifest& manifest);
DatasetManifest parse_manifest(std::string_view text);

void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);
/// Throws IoError or Error (malformed line).
DatasetManifest read_manifest(const std::filesystem::path& path);

/// One id per line; '#' starts a comment; blank lines ignored.
std::vector<std::string> read_id_list(const std::filesystem::path& path);
std::vector<std::string> parse_id_list(std::string_view text);

/// Marks accepted and rejected ids. Idempotent. Throws UnknownId for ids not
/// in the manifest and CurationConflict for ids in both lists.
DatasetManifest apply_acceptlist(DatasetManifest manifest, const std::vector<std::string>& accept,
                                 const std::vector<std::string>& reject);

} // namespace inkwarp
