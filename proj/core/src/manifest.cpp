#include "inkwarp/manifest.hpp"

#include "inkwarp/error.hpp"
#include "inkwarp/random.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace inkwarp {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(Split s) {
  return s == Split::Train ? "train" : "val";
}

std::string_view to_string(Status s) {
  switch (s) {
  case Status::Accepted:
    return "accepted";
  case Status::Rejected:
    return "rejected";
  case Status::Auto:
    return "auto";
  }
  return "auto";
}

namespace {

Split split_from(std::string_view s) {
  if (s == "train")
    return Split::Train;
  if (s == "val")
    return Split::Val;
  throw Error("manifest: unknown split '" + std::string(s) + "'");
}

Status status_from(std::string_view s) {
  if (s == "accepted")
    return Status::Accepted;
  if (s == "rejected")
    return Status::Rejected;
  if (s == "auto")
    return Status::Auto;
  throw Error("manifest: unknown status '" + std::string(s) + "'");
}

} // namespace

Split split_for(std::string_view example_id, double train_ratio) {
  const double u = unit_interval(splitmix64(fnv1a(example_id)));
  return u < train_ratio ? Split::Train : Split::Val;
}

const ManifestEntry* DatasetManifest::find(std::string_view example_id) const {
  const auto it = std::lower_bound(
      entries.begin(), entries.end(), example_id,
      [](const ManifestEntry& e, std::string_view id) { return e.example_id < id; });
  if (it != entries.end() && it->example_id == example_id)
    return &*it;
  return nullptr;
}

std::size_t DatasetManifest::count(Status s) const {
  return static_cast<std::size_t>(std::count_if(
      entries.begin(), entries.end(), [s](const ManifestEntry& e) { return e.status == s; }));
}

std::size_t DatasetManifest::usable_count() const {
  return entries.size() - count(Status::Rejected);
}

void DatasetManifest::normalize() {
  std::sort(entries.begin(), entries.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) { return a.example_id < b.example_id; });
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (entries[i].example_id == entries[i - 1].example_id)
      throw Error("manifest: duplicate example_id '" + entries[i].example_id + "'");
}

std::string serialize(const DatasetManifest& manifest) {
  std::string out;
  for (const auto& e : manifest.entries) {
    const json row = {{"example_id", e.example_id},
                      {"source_id", e.source_id},
                      {"transform_chain", e.transform_chain},
                      {"seed", e.seed},
                      {"split", to_string(e.split)},
                      {"output_paths", e.outputs},
                      {"status", to_string(e.status)}};
    out += row.dump();
    out += '\n';
  }
  return out;
}

DatasetManifest parse_manifest(std::string_view text) {
  DatasetManifest manifest;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    try {
      const json row = json::parse(line);
      ManifestEntry e;
      e.example_id = row.at("example_id").get<std::string>();
      e.source_id = row.at("source_id").get<std::string>();
      e.transform_chain = row.at("transform_chain").get<std::string>();
      e.seed = row.at("seed").get<std::uint64_t>();
      e.split = split_from(row.at("split").get<std::string>());
      e.outputs = row.at("output_paths").get<std::map<std::string, std::string>>();
      e.status = status_from(row.at("status").get<std::string>());
      manifest.entries.push_back(std::move(e));
    } catch (const json::exception& ex) {
      throw Error("manifest line " + std::to_string(line_no) + ": " + ex.what());
    }
  }
  manifest.normalize();
  return manifest;
}

void write_manifest(const DatasetManifest& manifest, const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot write manifest '" + path.string() + "'");
  out << serialize(manifest);
  if (!out)
    throw IoError("failed writing manifest '" + path.string() + "'");
}

DatasetManifest read_manifest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot read manifest '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_manifest(buf.str());
}

std::vector<std::string> parse_id_list(std::string_view text) {
  std::vector<std::string> ids;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos)
      continue;
    const auto last = line.find_last_not_of(" \t\r");
    ids.push_back(line.substr(first, last - first + 1));
  }
  return ids;
}

std::vector<std::string> read_id_list(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot read id list '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_id_list(buf.str());
}

DatasetManifest apply_acceptlist(DatasetManifest manifest, const std::vector<std::string>& accept,
                                 const std::vector<std::string>& reject) {
  manifest.normalize();
  const std::set<std::string> accepted(accept.begin(), accept.end());
  for (const auto& id : reject)
    if (accepted.count(id))
      throw CurationConflict("example id '" + id + "' is in both the accept and reject lists");
  for (const auto* list : {&accept, &reject})
    for (const auto& id : *list)
      if (!manifest.find(id))
        throw UnknownId("unknown example id '" + id + "'");

  const std::set<std::string> rejected(reject.begin(), reject.end());
  for (auto& e : manifest.entries) {
    if (accepted.count(e.example_id))
      e.status = Status::Accepted;
    else if (rejected.count(e.example_id))
      e.status = Status::Rejected;
  }
  return manifest;
}

} // namespace inkwarp
