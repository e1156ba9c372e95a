#include "cli.hpp"

#include "inkwarp/chain_runner.hpp"
#include "inkwarp/elastic.hpp"
#include "inkwarp/error.hpp"
#include "inkwarp/image.hpp"
#include "inkwarp/manifest.hpp"
#include "inkwarp/parallel.hpp"
#include "inkwarp/pipeline.hpp"
#include "inkwarp/plan.hpp"
#include "inkwarp/png_io.hpp"
#include "inkwarp/postprocess.hpp"
#include "inkwarp/synth.hpp"
#include "inkwarp/transform.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace inkwarp::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> size;
  int jobs = default_jobs();
  std::optional<std::string> config;

  int canvas() const { return size.value_or(256); }
  CanvasPolicy policy() const { return CanvasPolicy{canvas()}; }
};

void write_run_config(const fs::path& dir, json j) {
  fs::create_directories(dir);
  std::ofstream f(dir / "run_config.json", std::ios::binary | std::ios::trunc);
  if (!f)
    throw IoError("cannot write '" + (dir / "run_config.json").string() + "'");
  f << j.dump(2) << '\n';
}

json globals_json(const Globals& g) {
  json j = {{"jobs", g.jobs}, {"size", g.canvas()}};
  j["seed"] = g.seed ? json(*g.seed) : json(nullptr);
  j["out"] = g.out ? json(*g.out) : json(nullptr);
  j["config"] = g.config ? json(*g.config) : json(nullptr);
  return j;
}

// Single-file commands log their resolved config only when --out names a
// directory for it.
void maybe_log(const Globals& g, json j) {
  if (g.out)
    write_run_config(*g.out, std::move(j));
}

// ---------------------------------------------------------------------------

struct WarpArgs {
  std::string in, out, spec;
};

int cmd_warp(const Globals& g, const WarpArgs& a, std::string_view command) {
  const Transform t = parse_transform(a.spec, g.seed.value_or(0));
  const GrayImage src = canonicalize(load_png(a.in), g.policy());
  save_png(apply_transform(src, t, g.jobs), a.out);
  maybe_log(g, {{"command", command},
                {"input", a.in},
                {"output", a.out},
                {"transform", to_string(t)},
                {"globals", globals_json(g)}});
  return kOk;
}

struct ElasticArgs {
  std::string in, out, preset = "line";
  std::optional<double> alpha, sigma;
};

int cmd_elastic(const Globals& g, const ElasticArgs& a) {
  ElasticSpec spec;
  if (a.preset == "line")
    spec = kElasticLinePreset;
  else if (a.preset == "shape")
    spec = kElasticShapePreset;
  else
    throw InvalidSpec("unknown elastic preset '" + a.preset + "' (line, shape)");
  if (a.alpha)
    spec.alpha = *a.alpha;
  if (a.sigma)
    spec.sigma = *a.sigma;
  spec.seed = g.seed.value_or(0);
  return cmd_warp(g, WarpArgs{a.in, a.out, to_string(spec)}, "elastic");
}

struct DatasetArgs {
  std::string config;
};

int cmd_dataset(const Globals& g, const DatasetArgs& a) {
  const std::string path = !a.config.empty() ? a.config : g.config.value_or("");
  if (path.empty())
    throw PlanError("dataset needs a config file");
  DatasetConfig config = load_dataset_config(path);
  if (g.seed)
    config.plan.master_seed = *g.seed;
  if (g.size)
    config.plan.canvas.target_size = *g.size;
  const fs::path out = g.out.value_or("dataset_out");

  write_run_config(out, {{"command", "dataset"},
                         {"config_file", path},
                         {"resolved", to_json(config)},
                         {"globals", globals_json(g)}});
  const DatasetReport r = run_dataset(config, out, g.jobs, &std::cout);
  std::cout << "originals " << r.originals << ", planned " << r.planned << ", accepted "
            << r.accepted << ", rejected " << r.rejected << ", sheet pages " << r.sheet_pages
            << '\n';
  return kOk;
}

struct SheetArgs {
  std::string manifest;
  int cols = 4, rows = 4;
};

int cmd_sheet(const Globals& g, const SheetArgs& a) {
  const fs::path manifest_path(a.manifest);
  const DatasetManifest m = read_manifest(manifest_path);
  const fs::path dir = g.out ? fs::path(*g.out) : manifest_path.parent_path() / "sheets";
  const ContactSheets sheets = contact_sheet(m, manifest_path.parent_path(), a.cols, a.rows,
                                             g.canvas());
  write_contact_sheets(sheets, dir);
  write_run_config(dir, {{"command", "sheet"},
                         {"manifest", a.manifest},
                         {"cols", a.cols},
                         {"rows", a.rows},
                         {"globals", globals_json(g)}});
  std::cout << sheets.pages.size() << " page(s) for " << m.entries.size() << " entries in "
            << dir.string() << '\n';
  return kOk;
}

struct CurateArgs {
  std::string manifest;
  std::optional<std::string> accept, reject;
};

int cmd_curate(const Globals& g, const CurateArgs& a) {
  const fs::path manifest_path(a.manifest);
  DatasetManifest m = read_manifest(manifest_path);
  std::vector<std::string> accept, reject;
  if (a.accept)
    accept = read_id_list(*a.accept);
  if (a.reject)
    reject = read_id_list(*a.reject);
  m = apply_acceptlist(std::move(m), accept, reject);
  const fs::path out_path = g.out ? fs::path(*g.out) / "manifest.jsonl" : manifest_path;
  if (g.out)
    fs::create_directories(*g.out);
  write_manifest(m, out_path);
  write_run_config(out_path.parent_path(),
                   {{"command", "curate"},
                    {"manifest", a.manifest},
                    {"accept", a.accept ? json(*a.accept) : json(nullptr)},
                    {"reject", a.reject ? json(*a.reject) : json(nullptr)},
                    {"globals", globals_json(g)}});
  std::cout << m.usable_count() << " usable, " << m.count(Status::Rejected) << " rejected of "
            << m.entries.size() << '\n';
  return kOk;
}

struct AssembleArgs {
  std::string manifest;
  std::vector<std::string> directions{"ab"};
  double ratio = 0.9;
};

int cmd_assemble(const Globals& g, const AssembleArgs& a) {
  const fs::path manifest_path(a.manifest);
  const DatasetManifest m = read_manifest(manifest_path);
  const fs::path out = g.out ? fs::path(*g.out) : manifest_path.parent_path();
  for (const auto& d : a.directions) {
    const SplitCounts c =
        assemble(m, manifest_path.parent_path(), parse_direction(d), a.ratio, out, g.jobs);
    std::cout << d << ": " << c.train << " train + " << c.val << " val = " << c.total() << '\n';
  }
  write_run_config(out, {{"command", "assemble"},
                         {"manifest", a.manifest},
                         {"directions", a.directions},
                         {"split_ratio", a.ratio},
                         {"globals", globals_json(g)}});
  return kOk;
}

struct BinarizeArgs {
  std::string in, out;
  double sigma = kDefaultBinarizeSigma;
};

int cmd_binarize(const Globals& g, const BinarizeArgs& a) {
  const GrayImage img = load_png(a.in);
  save_png(binarize(img, a.sigma), a.out);
  maybe_log(g, {{"command", "binarize"},
                {"input", a.in},
                {"output", a.out},
                {"sigma", a.sigma},
                {"globals", globals_json(g)}});
  return kOk;
}

struct ChainArgs {
  std::string config;
};

int cmd_chain(const Globals& g, const ChainArgs& a) {
  const std::string path = !a.config.empty() ? a.config : g.config.value_or("");
  if (path.empty())
    throw PlanError("chain needs a config file");
  ChainConfig config;
  try {
    config = load_chain_config(path);
  } catch (const IoError&) {
    throw;
  } catch (const Error& e) {
    throw PlanError(e.what());
  }
  if (g.out)
    config.work_dir = *g.out;
  if (g.size)
    config.canvas_size = *g.size;
  config.jobs = g.jobs;

  write_run_config(config.work_dir, {{"command", "chain"},
                                     {"config_file", path},
                                     {"resolved", to_json(config)},
                                     {"globals", globals_json(g)}});
  const ChainReport report = run_chain(config);
  write_chain_report(report, config.work_dir);
  std::cout << report.summary_table();
  if (report.any_spawn_error()) {
    std::cerr << "error: a stage command could not be started\n";
    return kSpawnError;
  }
  return kOk;
}

// `ops IN OUT op...` applies simple image operations in order. Used to build
// stage commands whose expected outputs are known exactly.
//   frame:W[:V]   paint a W-pixel border of value V (default 0)
//   invert
//   binarize[:S]  Gaussian Otsu with sigma S (default 1)
//   canon         canonicalize to --size
//   warp:SPEC     apply a transform
struct OpsArgs {
  std::string in, out;
  std::vector<std::string> ops;
};

double parse_double(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
    throw InvalidSpec("bad number '" + std::string(s) + "' in " + std::string(what));
  return v;
}

GrayImage apply_op(const Globals& g, const GrayImage& img, const std::string& op) {
  const auto colon = op.find(':');
  const std::string name = op.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : op.substr(colon + 1);
  if (name == "invert" && arg.empty())
    return invert(img);
  if (name == "canon" && arg.empty())
    return canonicalize(img, g.policy());
  if (name == "binarize")
    return binarize(img, arg.empty() ? kDefaultBinarizeSigma : parse_double(arg, op));
  if (name == "warp" && !arg.empty())
    return apply_transform(img, parse_transform(arg, g.seed.value_or(0)), g.jobs);
  if (name == "frame" && !arg.empty()) {
    const auto second = arg.find(':');
    const double width = parse_double(arg.substr(0, second), op);
    const double value = second == std::string::npos ? 0.0 : parse_double(arg.substr(second + 1), op);
    if (width < 0 || value < 0 || value > 255)
      throw InvalidSpec("frame width must be >= 0 and value in [0, 255]: '" + op + "'");
    return add_frame(img, static_cast<int>(width), static_cast<std::uint8_t>(value));
  }
  throw InvalidSpec("unknown op '" + op + "' (frame:W[:V], invert, binarize[:S], canon, warp:SPEC)");
}

int cmd_ops(const Globals& g, const OpsArgs& a) {
  GrayImage img = load_png(a.in);
  for (const auto& op : a.ops)
    img = apply_op(g, img, op);
  save_png(img, a.out);
  maybe_log(g, {{"command", "ops"},
                {"input", a.in},
                {"output", a.out},
                {"ops", a.ops},
                {"globals", globals_json(g)}});
  return kOk;
}

struct SynthArgs {
  std::string character, dir;
  int count = 9;
};

int cmd_synth(const Globals& g, const SynthArgs& a) {
  const auto tuples = write_synth_set(parse_character(a.character), a.count, a.dir, g.canvas());
  std::cout << "wrote " << tuples.size() << " " << a.character << " originals to " << a.dir
            << '\n';
  return kOk;
}

int report(std::string_view kind, const std::exception& e, int code) {
  std::cerr << "error (" << kind << "): " << e.what() << '\n';
  return code;
}

} // namespace

int run(int argc, char** argv) {
  CLI::App app{"inkwarp: staged drawing augmentation and dataset tool"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Seed for elastic steps / dataset master seed");
  app.add_option("--out", g.out, "Output directory (resolved config is logged there)");
  app.add_option("--size", g.size, "Canvas size in pixels")->check(CLI::Range(16, 16384));
  app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--config", g.config, "Config file for dataset or chain");

  int code = kOk;
  std::function<int()> action;

  WarpArgs warp;
  auto* w = app.add_subcommand("warp", "Apply a transform to one image");
  w->add_option("in", warp.in)->required();
  w->add_option("out", warp.out)->required();
  w->add_option("spec", warp.spec, "e.g. \"compose[affine(rot=0.05);xstretch()]\"")->required();
  w->callback([&] { action = [&] { return cmd_warp(g, warp, "warp"); }; });

  ElasticArgs el;
  auto* e = app.add_subcommand("elastic", "Apply an elastic deformation to one image");
  e->add_option("in", el.in)->required();
  e->add_option("out", el.out)->required();
  e->add_option("--preset", el.preset, "line or shape")->capture_default_str();
  e->add_option("--alpha", el.alpha, "Maximum displacement in pixels");
  e->add_option("--sigma", el.sigma, "Smoothing std-dev in pixels");
  e->callback([&] { action = [&] { return cmd_elastic(g, el); }; });

  DatasetArgs ds;
  auto* d = app.add_subcommand("dataset", "Expand, materialize, curate and assemble a dataset");
  d->add_option("config", ds.config);
  d->callback([&] { action = [&] { return cmd_dataset(g, ds); }; });

  SheetArgs sh;
  auto* s = app.add_subcommand("sheet", "Render contact sheets for a manifest");
  s->add_option("manifest", sh.manifest)->required();
  s->add_option("--cols", sh.cols)->check(CLI::PositiveNumber)->capture_default_str();
  s->add_option("--rows", sh.rows)->check(CLI::PositiveNumber)->capture_default_str();
  s->callback([&] { action = [&] { return cmd_sheet(g, sh); }; });

  CurateArgs cu;
  auto* c = app.add_subcommand("curate", "Apply accept/reject id lists to a manifest");
  c->add_option("manifest", cu.manifest)->required();
  c->add_option("--accept", cu.accept, "File with accepted example ids");
  c->add_option("--reject", cu.reject, "File with rejected example ids");
  c->callback([&] { action = [&] { return cmd_curate(g, cu); }; });

  AssembleArgs as;
  auto* a = app.add_subcommand("assemble", "Write combined pairs for a manifest");
  a->add_option("manifest", as.manifest)->required();
  a->add_option("--direction", as.directions, "ab, bc, ac (repeatable)")
      ->check(CLI::IsMember({"ab", "bc", "ac"}))
      ->capture_default_str();
  a->add_option("--ratio", as.ratio, "Train fraction")->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  a->callback([&] { action = [&] { return cmd_assemble(g, as); }; });

  BinarizeArgs bz;
  auto* b = app.add_subcommand("binarize", "Gaussian blur then Otsu threshold");
  b->add_option("in", bz.in)->required();
  b->add_option("out", bz.out)->required();
  b->add_option("--sigma", bz.sigma, "Blur std-dev; 0 skips the blur")->capture_default_str();
  b->callback([&] { action = [&] { return cmd_binarize(g, bz); }; });

  ChainArgs ch;
  auto* chn = app.add_subcommand("chain", "Run images through external stage commands");
  chn->add_option("config", ch.config);
  chn->callback([&] { action = [&] { return cmd_chain(g, ch); }; });

  OpsArgs op;
  auto* o = app.add_subcommand("ops", "Apply image operations in order");
  o->add_option("in", op.in)->required();
  o->add_option("out", op.out)->required();
  o->add_option("op", op.ops, "frame:W[:V] invert binarize[:S] canon warp:SPEC")->required();
  o->callback([&] { action = [&] { return cmd_ops(g, op); }; });

  SynthArgs sy;
  auto* sn = app.add_subcommand("synth", "Write synthetic staged originals");
  sn->add_option("character", sy.character, "giraffe, flower or dragon")->required();
  sn->add_option("count", sy.count)->required()->check(CLI::Range(1, 99));
  sn->add_option("dir", sy.dir)->required();
  sn->callback([&] { action = [&] { return cmd_synth(g, sy); }; });

  app.add_subcommand("version", "Print the version")->callback([&] {
    action = [] {
      std::cout << "inkwarp " << INKWARP_VERSION << '\n';
      return kOk;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& ok) {
    return app.exit(ok);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kSpecError;
  }

  try {
    code = action();
  } catch (const InvalidSpec& ex) {
    return report("spec", ex, kSpecError);
  } catch (const InvalidSigma& ex) {
    return report("spec", ex, kSpecError);
  } catch (const EmptyAfterCuration& ex) {
    return report("empty", ex, kEmpty);
  } catch (const CurationError& ex) {
    return report("curation", ex, kCurationError);
  } catch (const SpawnError& ex) {
    return report("spawn", ex, kSpawnError);
  } catch (const PlanError& ex) {
    return report("plan", ex, kPlanError);
  } catch (const MissingStage& ex) {
    return report("plan", ex, kPlanError);
  } catch (const std::exception& ex) {
    return report("io", ex, kIoError);
  }
  return code;
}

} // namespace inkwarp::cli
