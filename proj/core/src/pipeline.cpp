#include "inkwarp/pipeline.hpp"

#include "inkwarp/error.hpp"
#include "inkwarp/parallel.hpp"
#include "inkwarp/png_io.hpp"

#include <fstream>
#include <mutex>
#include <ostream>

namespace inkwarp {

namespace fs = std::filesystem;

std::string_view to_string(Direction d) {
  switch (d) {
  case Direction::AtoB:
    return "ab";
  case Direction::BtoC:
    return "bc";
  case Direction::AtoC:
    return "ac";
  }
  return "ab";
}

Direction parse_direction(std::string_view s) {
  if (s == "ab" || s == "AtoB")
    return Direction::AtoB;
  if (s == "bc" || s == "BtoC")
    return Direction::BtoC;
  if (s == "ac" || s == "AtoC")
    return Direction::AtoC;
  throw Error("unknown direction '" + std::string(s) + "' (expected ab, bc or ac)");
}

TransformedStages transform_stages(const Transform& chain, const StageImages& originals,
                                   int jobs) {
  const int w = originals.a.width();
  const int h = originals.a.height();
  const TransformSampler sampler(chain, w, h, jobs);
  const SampleGrid grid = sampler.grid(jobs);
  const std::uint64_t fp = fingerprint(grid);

  TransformedStages out{{resample(originals.a, grid, jobs), resample(originals.b, grid, jobs),
                         std::nullopt},
                        {fp, fp}};
  if (originals.c) {
    out.images.c = resample(*originals.c, grid, jobs);
    out.grid_fingerprints.push_back(fp);
  }
  return out;
}

MaterializeResult materialize(const PlanEntry& entry, const StageImages& originals,
                              const fs::path& out_dir, double split_ratio, int jobs) {
  TransformedStages staged = transform_stages(entry.chain, originals, jobs);

  MaterializeResult result;
  result.grid_fingerprints = std::move(staged.grid_fingerprints);
  ManifestEntry& row = result.row;
  row.example_id = entry.example_id;
  row.source_id = entry.source_id;
  row.transform_chain = to_string(entry.chain);
  row.seed = entry.seed;
  row.split = split_for(entry.example_id, split_ratio);
  row.status = Status::Auto;

  const fs::path stage_dir = out_dir / "stages";
  fs::create_directories(stage_dir);
  auto write = [&](const GrayImage& img, const char* stage) {
    const std::string rel = "stages/" + entry.example_id + "_" + stage + ".png";
    save_png(img, out_dir / rel);
    row.outputs[stage] = rel;
  };
  write(staged.images.a, "A");
  write(staged.images.b, "B");
  if (staged.images.c)
    write(*staged.images.c, "C");
  return result;
}

namespace {

std::pair<const char*, const char*> direction_stages(Direction d) {
  switch (d) {
  case Direction::AtoB:
    return {"A", "B"};
  case Direction::BtoC:
    return {"B", "C"};
  case Direction::AtoC:
    return {"A", "C"};
  }
  return {"A", "B"};
}

void recreate_dir(const fs::path& dir) {
  std::error_code ec;
  fs::remove_all(dir, ec);
  fs::create_directories(dir, ec);
  if (ec)
    throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
}

} // namespace

SplitCounts assemble(const DatasetManifest& manifest, const fs::path& manifest_dir,
                     Direction direction, double split_ratio, const fs::path& out_dir, int jobs) {
  const auto [in_stage, target_stage] = direction_stages(direction);

  std::vector<const ManifestEntry*> rows;
  for (const auto& e : manifest.entries) {
    if (!e.usable())
      continue;
    if (!e.outputs.count(in_stage) || !e.outputs.count(target_stage))
      throw MissingStage("entry '" + e.example_id + "' has no stage " +
                         (e.outputs.count(in_stage) ? target_stage : in_stage) +
                         " needed for direction " + std::string(to_string(direction)));
    rows.push_back(&e);
  }
  if (rows.empty())
    throw EmptyAfterCuration("no accepted entries to assemble for direction " +
                             std::string(to_string(direction)));

  const fs::path dir = out_dir / to_string(direction);
  recreate_dir(dir / "train");
  recreate_dir(dir / "val");

  std::vector<Split> splits(rows.size());
  parallel_for(rows.size(), jobs, [&](std::size_t i) {
    const ManifestEntry& e = *rows[i];
    const GrayImage input = load_png(manifest_dir / e.outputs.at(in_stage));
    const GrayImage target = load_png(manifest_dir / e.outputs.at(target_stage));
    if (input.width() != target.width() || input.height() != target.height())
      throw Error("entry '" + e.example_id + "': stage images differ in size");
    splits[i] = split_for(e.example_id, split_ratio);
    save_png(hconcat(input, target),
             dir / std::string(to_string(splits[i])) / (e.example_id + ".png"));
  });

  SplitCounts counts;
  for (const Split s : splits)
    (s == Split::Train ? counts.train : counts.val) += 1;
  return counts;
}

ContactSheets contact_sheet(const DatasetManifest& manifest, const fs::path& manifest_dir,
                            int cols, int rows, int canvas_size) {
  if (cols < 1 || rows < 1)
    throw Error("contact sheet grid must be at least 1x1");
  constexpr std::uint8_t kFrame = 160;

  std::vector<const ManifestEntry*> sorted;
  for (const auto& e : manifest.entries)
    sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(),
            [](const auto* a, const auto* b) { return a->example_id < b->example_id; });

  ContactSheets sheets;
  const std::size_t per_page = static_cast<std::size_t>(cols) * static_cast<std::size_t>(rows);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const std::size_t page = i / per_page;
    if (page == sheets.pages.size())
      sheets.pages.emplace_back(cols * canvas_size, rows * canvas_size);
    const int slot = static_cast<int>(i % per_page);
    const int r = slot / cols, c = slot % cols;

    const ManifestEntry& e = *sorted[i];
    const std::string& final_stage = e.outputs.count("C") ? e.outputs.at("C") : e.outputs.at("B");
    GrayImage thumb = load_png(manifest_dir / final_stage);
    if (thumb.width() != canvas_size || thumb.height() != canvas_size)
      thumb = canonicalize(thumb, CanvasPolicy{canvas_size});
    thumb = add_frame(thumb, 1, kFrame);

    GrayImage& sheet = sheets.pages[page];
    for (int y = 0; y < canvas_size; ++y) {
      const auto src = thumb.row(y);
      std::copy(src.begin(), src.end(), &sheet.at(c * canvas_size, r * canvas_size + y));
    }
    char name[32];
    std::snprintf(name, sizeof name, "sheet_%03zu.png", page);
    sheets.index_lines.push_back(std::string(name) + '\t' + std::to_string(r) + '\t' +
                                 std::to_string(c) + '\t' + e.example_id + '\t' +
                                 std::string(to_string(e.status)));
  }
  return sheets;
}

void write_contact_sheets(const ContactSheets& sheets, const fs::path& dir) {
  recreate_dir(dir);
  for (std::size_t p = 0; p < sheets.pages.size(); ++p) {
    char name[32];
    std::snprintf(name, sizeof name, "sheet_%03zu.png", p);
    save_png(sheets.pages[p], dir / name);
  }
  std::ofstream index(dir / "sheet_index.txt", std::ios::binary | std::ios::trunc);
  if (!index)
    throw IoError("cannot write sheet index in '" + dir.string() + "'");
  for (const auto& line : sheets.index_lines)
    index << line << '\n';
}

DatasetReport run_dataset(const DatasetConfig& config, const fs::path& out_dir, int jobs,
                          std::ostream* log) {
  const AugmentationPlan& plan = config.plan;
  validate(plan);
  if (config.originals.empty())
    throw PlanError("empty plan: config lists no originals");

  DatasetReport report;
  report.originals = config.originals.size();

  std::vector<StageImages> originals(config.originals.size());
  parallel_for(originals.size(), jobs, [&](std::size_t i) {
    originals[i] = load_stage_images(config.originals[i], plan.canvas);
  });
  std::map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < config.originals.size(); ++i)
    by_id[config.originals[i].id] = i;

  const std::vector<PlanEntry> entries = expand_plan(plan, config.originals);
  report.planned = entries.size();
  if (log)
    *log << "expanded " << entries.size() << " entries from " << originals.size()
         << " originals\n";

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec)
    throw IoError("cannot create output directory '" + out_dir.string() + "'");
  for (const char* stale : {"stages", "ab", "bc", "ac", "sheets"})
    fs::remove_all(out_dir / stale, ec);
  fs::create_directories(out_dir / "stages");

  // Entries are independent; each writes only its own files, rows are
  // gathered by index and the manifest is written once.
  DatasetManifest manifest;
  manifest.entries.resize(entries.size());
  parallel_for(entries.size(), jobs, [&](std::size_t i) {
    const PlanEntry& entry = entries[i];
    manifest.entries[i] =
        materialize(entry, originals[by_id.at(entry.source_id)], out_dir, plan.split_ratio, 1)
            .row;
  });
  manifest.normalize();

  std::vector<std::string> accept, reject;
  if (config.accept_list)
    accept = read_id_list(*config.accept_list);
  if (config.reject_list)
    reject = read_id_list(*config.reject_list);
  manifest = apply_acceptlist(std::move(manifest), accept, reject);
  write_manifest(manifest, out_dir / "manifest.jsonl");
  report.accepted = manifest.usable_count();
  report.rejected = manifest.count(Status::Rejected);

  std::vector<std::string> directions = config.directions;
  if (directions.empty()) {
    const bool all_c = std::all_of(config.originals.begin(), config.originals.end(),
                                   [](const StageTuple& t) { return t.has_c(); });
    directions = all_c ? std::vector<std::string>{"ab", "bc", "ac"}
                       : std::vector<std::string>{"ab"};
  }
  for (const auto& d : directions) {
    const SplitCounts counts =
        assemble(manifest, out_dir, parse_direction(d), plan.split_ratio, out_dir, jobs);
    report.directions[d] = counts;
    if (log)
      *log << d << ": " << counts.train << " train + " << counts.val << " val = "
           << counts.total() << '\n';
  }

  const ContactSheets sheets =
      contact_sheet(manifest, out_dir, config.sheet_cols, config.sheet_rows,
                    plan.canvas.target_size);
  write_contact_sheets(sheets, out_dir / "sheets");
  report.sheet_pages = sheets.pages.size();
  return report;
}

} // namespace inkwarp
