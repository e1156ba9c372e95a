#include "inkwarp/chain_runner.hpp"

#include "inkwarp/error.hpp"
#include "inkwarp/parallel.hpp"
#include "inkwarp/png_io.hpp"
#include "inkwarp/postprocess.hpp"
#include "inkwarp/process.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace inkwarp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::size_t occurrences(std::string_view haystack, std::string_view needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + needle.size()))
    ++n;
  return n;
}

void replace_all(std::string& s, std::string_view from, const std::string& to) {
  for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
    s.replace(pos, from.size(), to);
}

} // namespace

void validate(const StageCommand& cmd) {
  if (cmd.name.empty())
    throw Error("stage command needs a name");
  if (occurrences(cmd.command, "{in}") != 1 || occurrences(cmd.command, "{out}") != 1)
    throw Error("stage '" + cmd.name + "': command must contain {in} and {out} exactly once");
  if (!(cmd.timeout_s > 0))
    throw Error("stage '" + cmd.name + "': timeout_s must be positive");
}

fs::path run_stage(const StageCommand& cmd, const fs::path& input, const fs::path& output,
                   int canvas_size) {
  validate(cmd);
  std::vector<std::string> argv = split_command(cmd.command);
  for (auto& word : argv) {
    replace_all(word, "{in}", input.string());
    replace_all(word, "{out}", output.string());
  }

  std::error_code ec;
  fs::remove(output, ec);
  fs::path log = output;
  log += ".log";
  fs::remove(log, ec);

  const auto timeout = std::chrono::milliseconds(static_cast<long long>(cmd.timeout_s * 1000.0));
  const ProcessResult result = run_process(argv, timeout, log);
  if (result.exit_code != 0)
    throw BadOutput("stage '" + cmd.name + "' exited with status " +
                    std::to_string(result.exit_code) + " (see " + log.string() + ")");
  if (!fs::exists(output))
    throw BadOutput("stage '" + cmd.name + "' wrote no output at " + output.string());

  GrayImage img;
  try {
    img = load_png(output);
  } catch (const Error& e) {
    throw BadOutput("stage '" + cmd.name + "' output is unreadable: " + e.what());
  }
  if (img.width() != canvas_size || img.height() != canvas_size)
    throw BadOutput("stage '" + cmd.name + "' output is " + std::to_string(img.width()) + "x" +
                    std::to_string(img.height()) + ", expected " + std::to_string(canvas_size) +
                    "x" + std::to_string(canvas_size));
  return output;
}

double pixel_agreement(const GrayImage& a, const GrayImage& b) {
  const GrayImage ba = binarize(a, 0.0);
  const GrayImage bb = binarize(b, 0.0);
  return 1.0 - static_cast<double>(count_differences(ba, bb)) / static_cast<double>(ba.size());
}

// ---------------------------------------------------------------------------
// Config

namespace {

StageCommand read_stage(const json& s) {
  StageCommand cmd;
  cmd.name = s.at("name").get<std::string>();
  cmd.command = s.at("command").get<std::string>();
  cmd.timeout_s = s.value("timeout_s", cmd.timeout_s);
  for (const auto& item : s.items())
    if (item.key() != "name" && item.key() != "command" && item.key() != "timeout_s")
      throw Error("unknown key '" + item.key() + "' in stage command");
  validate(cmd);
  return cmd;
}

json stage_json(const StageCommand& c) {
  return {{"name", c.name}, {"command", c.command}, {"timeout_s", c.timeout_s}};
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

} // namespace

ChainConfig chain_config_from_json(const json& j, const fs::path& base_dir) {
  static const std::set<std::string> known = {"stages",      "oneshot",  "inputs",
                                              "inputs_dir",  "targets_dir", "region",
                                              "work_dir",    "canvas_size", "jobs"};
  try {
    for (const auto& item : j.items())
      if (!known.count(item.key()))
        throw Error("unknown key '" + item.key() + "' in chain config");

    ChainConfig config;
    for (const auto& s : j.at("stages"))
      config.stages.push_back(read_stage(s));
    if (config.stages.empty())
      throw Error("chain config needs at least one stage");
    if (j.contains("oneshot"))
      config.oneshot = read_stage(j.at("oneshot"));

    if (j.contains("inputs"))
      for (const auto& p : j.at("inputs"))
        config.inputs.push_back(resolve(base_dir, p.get<std::string>()));
    if (j.contains("inputs_dir")) {
      const fs::path dir = resolve(base_dir, j.at("inputs_dir").get<std::string>());
      if (!fs::is_directory(dir))
        throw IoError("inputs_dir '" + dir.string() + "' is not a directory");
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".png")
          found.push_back(e.path());
      std::sort(found.begin(), found.end());
      config.inputs.insert(config.inputs.end(), found.begin(), found.end());
    }
    if (config.inputs.empty())
      throw Error("chain config lists no inputs");

    if (j.contains("targets_dir"))
      config.targets_dir = resolve(base_dir, j.at("targets_dir").get<std::string>());
    if (j.contains("region")) {
      const json& r = j.at("region");
      config.region = Region{r.at("x0").get<int>(), r.at("y0").get<int>(), r.at("x1").get<int>(),
                             r.at("y1").get<int>()};
    }
    if (j.contains("work_dir"))
      config.work_dir = resolve(base_dir, j.at("work_dir").get<std::string>());
    config.canvas_size = j.value("canvas_size", config.canvas_size);
    config.jobs = j.value("jobs", config.jobs);
    if (config.canvas_size < 16)
      throw Error("canvas_size must be >= 16");
    if (config.region) {
      const Region& r = *config.region;
      if (r.x0 < 0 || r.y0 < 0 || r.x1 > config.canvas_size || r.y1 > config.canvas_size ||
          r.x0 >= r.x1 || r.y0 >= r.y1)
        throw Error("region must be a non-empty rectangle inside the canvas");
    }
    return config;
  } catch (const json::exception& e) {
    throw Error(std::string("chain config: ") + e.what());
  }
}

ChainConfig load_chain_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot read chain config '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error("chain config '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return chain_config_from_json(j, path.parent_path());
}

json to_json(const ChainConfig& config) {
  json stages = json::array();
  for (const auto& s : config.stages)
    stages.push_back(stage_json(s));
  json inputs = json::array();
  for (const auto& p : config.inputs)
    inputs.push_back(p.string());
  json j = {{"stages", stages},
            {"inputs", inputs},
            {"work_dir", config.work_dir.string()},
            {"canvas_size", config.canvas_size},
            {"jobs", config.jobs}};
  if (config.oneshot)
    j["oneshot"] = stage_json(*config.oneshot);
  if (config.targets_dir)
    j["targets_dir"] = config.targets_dir->string();
  if (config.region)
    j["region"] = {{"x0", config.region->x0},
                   {"y0", config.region->y0},
                   {"x1", config.region->x1},
                   {"y1", config.region->y1}};
  return j;
}

// ---------------------------------------------------------------------------
// Running

namespace {

std::string stage_file(std::size_t index, const std::string& name) {
  char prefix[8];
  std::snprintf(prefix, sizeof prefix, "%02zu_", index);
  return prefix + name + ".png";
}

double region_ink(const GrayImage& img, const Region& r) {
  std::size_t ink = 0;
  for (int y = r.y0; y < r.y1; ++y)
    for (int x = r.x0; x < r.x1; ++x)
      ink += img.at(x, y) < kInkThreshold;
  return static_cast<double>(ink) / static_cast<double>((r.x1 - r.x0) * (r.y1 - r.y0));
}

void run_one(const ChainConfig& config, ChainRecord& rec) {
  const fs::path dir = config.work_dir / rec.input_id;
  fs::create_directories(dir);
  const CanvasPolicy canvas{config.canvas_size};

  const GrayImage input = canonicalize(load_png(rec.input), canvas);
  fs::path current = dir / stage_file(0, "input");
  save_png(input, current);

  for (std::size_t i = 0; i < config.stages.size(); ++i) {
    const StageCommand& stage = config.stages[i];
    const fs::path out = dir / stage_file(i + 1, stage.name);
    current = run_stage(stage, current, out, config.canvas_size);
    rec.intermediates.push_back(current);
  }
  rec.chained_output = current;
  const GrayImage chained = load_png(current);

  std::optional<GrayImage> oneshot;
  if (config.oneshot) {
    const fs::path out = dir / ("oneshot_" + config.oneshot->name + ".png");
    rec.oneshot_output =
        run_stage(*config.oneshot, dir / stage_file(0, "input"), out, config.canvas_size);
    oneshot = load_png(out);
  }

  std::optional<GrayImage> target;
  if (config.targets_dir) {
    const fs::path t = *config.targets_dir / rec.input.filename();
    if (fs::exists(t)) {
      rec.target = t;
      target = canonicalize(load_png(t), canvas);
    }
  }

  ChainMetrics& m = rec.metrics;
  const double canvas_px = static_cast<double>(chained.size());
  m.ink_ratio_chained = ink_ratio(chained);
  if (oneshot) {
    m.ink_ratio_oneshot = ink_ratio(*oneshot);
    m.chained_vs_oneshot_agreement = pixel_agreement(chained, *oneshot);
  }
  if (target) {
    const double target_ink = static_cast<double>(ink_count(*target));
    m.delta_ink_vs_target =
        std::abs(static_cast<double>(ink_count(chained)) - target_ink) / canvas_px;
    m.pixel_agreement = pixel_agreement(chained, *target);
    if (oneshot) {
      m.delta_ink_vs_target_oneshot =
          std::abs(static_cast<double>(ink_count(*oneshot)) - target_ink) / canvas_px;
      m.pixel_agreement_oneshot = pixel_agreement(*oneshot, *target);
    }
  }
  if (config.region) {
    m.region_ink_chained = region_ink(chained, *config.region);
    if (oneshot)
      m.region_ink_oneshot = region_ink(*oneshot, *config.region);
  }
}

} // namespace

ChainReport run_chain(const ChainConfig& config) {
  if (config.stages.empty())
    throw Error("run_chain needs at least one stage");
  for (const auto& s : config.stages)
    validate(s);
  if (config.oneshot)
    validate(*config.oneshot);

  ChainReport report;
  std::set<std::string> ids;
  for (const auto& input : config.inputs) {
    ChainRecord rec;
    rec.input = input;
    rec.input_id = input.stem().string();
    if (!ids.insert(rec.input_id).second)
      throw Error("duplicate input id '" + rec.input_id + "'");
    report.records.push_back(std::move(rec));
  }
  std::sort(report.records.begin(), report.records.end(),
            [](const ChainRecord& a, const ChainRecord& b) { return a.input_id < b.input_id; });

  fs::create_directories(config.work_dir);
  parallel_for(report.records.size(), config.jobs, [&](std::size_t i) {
    ChainRecord& rec = report.records[i];
    try {
      run_one(config, rec);
    } catch (const SpawnError& e) {
      rec.error_kind = "spawn";
      rec.error = e.what();
    } catch (const Timeout& e) {
      rec.error_kind = "timeout";
      rec.error = e.what();
    } catch (const BadOutput& e) {
      rec.error_kind = "bad_output";
      rec.error = e.what();
    } catch (const std::exception& e) {
      rec.error_kind = "io";
      rec.error = e.what();
    }
  });
  return report;
}

std::size_t ChainReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const ChainRecord& r) { return !r.ok(); }));
}

bool ChainReport::any_spawn_error() const {
  return std::any_of(records.begin(), records.end(),
                     [](const ChainRecord& r) { return r.error_kind == "spawn"; });
}

json to_json(const ChainRecord& r) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  auto opt_path = [](const std::optional<fs::path>& p) {
    return p ? json(p->string()) : json(nullptr);
  };
  json intermediates = json::array();
  for (const auto& p : r.intermediates)
    intermediates.push_back(p.string());
  return {{"input_id", r.input_id},
          {"input", r.input.string()},
          {"intermediates", intermediates},
          {"chained_output", opt_path(r.chained_output)},
          {"oneshot_output", opt_path(r.oneshot_output)},
          {"target", opt_path(r.target)},
          {"metrics",
           {{"ink_ratio_chained", opt(r.metrics.ink_ratio_chained)},
            {"ink_ratio_oneshot", opt(r.metrics.ink_ratio_oneshot)},
            {"delta_ink_vs_target", opt(r.metrics.delta_ink_vs_target)},
            {"delta_ink_vs_target_oneshot", opt(r.metrics.delta_ink_vs_target_oneshot)},
            {"pixel_agreement", opt(r.metrics.pixel_agreement)},
            {"pixel_agreement_oneshot", opt(r.metrics.pixel_agreement_oneshot)},
            {"chained_vs_oneshot_agreement", opt(r.metrics.chained_vs_oneshot_agreement)},
            {"region_ink_chained", opt(r.metrics.region_ink_chained)},
            {"region_ink_oneshot", opt(r.metrics.region_ink_oneshot)}}},
          {"error_kind", r.error_kind.empty() ? json(nullptr) : json(r.error_kind)},
          {"error", r.error.empty() ? json(nullptr) : json(r.error)}};
}

std::string ChainReport::summary_table() const {
  auto cell = [](const std::optional<double>& v) {
    char buf[16];
    if (!v)
      return std::string("-");
    std::snprintf(buf, sizeof buf, "%.4f", *v);
    return std::string(buf);
  };
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-24s %-10s %10s %10s %10s %10s %10s\n", "input", "status",
                "ink_chain", "ink_1shot", "agree", "agree_1sh", "d_ink");
  out << line;
  for (const auto& r : records) {
    std::snprintf(line, sizeof line, "%-24s %-10s %10s %10s %10s %10s %10s\n",
                  r.input_id.c_str(), r.ok() ? "ok" : r.error_kind.c_str(),
                  cell(r.metrics.ink_ratio_chained).c_str(),
                  cell(r.metrics.ink_ratio_oneshot).c_str(),
                  cell(r.metrics.pixel_agreement).c_str(),
                  cell(r.metrics.pixel_agreement_oneshot).c_str(),
                  cell(r.metrics.delta_ink_vs_target).c_str());
    out << line;
  }
  out << records.size() << " inputs, " << failures() << " failed\n";
  for (const auto& r : records)
    if (!r.ok())
      out << "  " << r.input_id << ": " << r.error << '\n';
  return out.str();
}

void write_chain_report(const ChainReport& report, const fs::path& work_dir) {
  fs::create_directories(work_dir);
  std::ofstream jsonl(work_dir / "chain_report.jsonl", std::ios::binary | std::ios::trunc);
  std::ofstream summary(work_dir / "chain_summary.txt", std::ios::binary | std::ios::trunc);
  if (!jsonl || !summary)
    throw IoError("cannot write chain report in '" + work_dir.string() + "'");
  for (const auto& r : report.records)
    jsonl << to_json(r).dump() << '\n';
  summary << report.summary_table();
}

} // namespace inkwarp
