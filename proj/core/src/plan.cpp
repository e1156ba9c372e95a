#include "inkwarp/plan.hpp"

#include "inkwarp/error.hpp"
#include "inkwarp/png_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <regex>
#include <set>

namespace inkwarp {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Stage tuples

StageImages load_stage_images(const StageTuple& tuple, const CanvasPolicy& canvas) {
  StageImages images{canonicalize(load_png(tuple.stage_a), canvas),
                     canonicalize(load_png(tuple.stage_b), canvas),
                     std::nullopt};
  if (tuple.stage_c)
    images.c = canonicalize(load_png(*tuple.stage_c), canvas);
  if (!stage_ink_monotone(images))
    throw PlanError("original '" + tuple.id +
                    "': later stages must add ink (ink(A) <= ink(B) <= ink(C) within 2% of canvas)");
  return images;
}

bool stage_ink_monotone(const StageImages& images) {
  const double slack = kStageInkTolerance * static_cast<double>(images.a.size());
  auto at_least = [slack](const GrayImage& later, const GrayImage& earlier) {
    return static_cast<double>(ink_count(later)) + slack >= static_cast<double>(ink_count(earlier));
  };
  if (!at_least(images.b, images.a))
    return false;
  return !images.c || at_least(*images.c, images.b);
}

std::vector<StageTuple> discover_tuples(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec))
    throw PlanError("originals directory '" + dir.string() + "' does not exist");

  static const std::regex pattern(R"(^(.+)_([AaBbCc])\.png$)");
  std::map<std::string, std::map<char, fs::path>> found;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file())
      continue;
    const std::string name = entry.path().filename().string();
    std::smatch m;
    if (!std::regex_match(name, m, pattern))
      continue;
    const char stage = static_cast<char>(std::toupper(static_cast<unsigned char>(m[2].str()[0])));
    found[m[1].str()][stage] = entry.path();
  }

  std::vector<StageTuple> tuples;
  for (auto& [id, stages] : found) {
    if (!stages.count('A') || !stages.count('B'))
      throw PlanError("original '" + id + "' in '" + dir.string() + "' needs both _A and _B images");
    StageTuple t{id, stages['A'], stages['B'], std::nullopt};
    if (stages.count('C'))
      t.stage_c = stages['C'];
    tuples.push_back(std::move(t));
  }
  if (tuples.empty())
    throw PlanError("no <id>_A.png/<id>_B.png originals found in '" + dir.string() + "'");
  return tuples;
}

// ---------------------------------------------------------------------------
// Plans

AugmentationPlan default_plan() {
  AugmentationPlan plan;
  plan.per_original = 72;
  plan.families.emplace_back(AffineFamily{});
  plan.families.emplace_back(HomeomorphismFamily{
      {std::nullopt, WarpSpec(XStretch{}), WarpSpec(YStretch{})}});
  plan.families.emplace_back(ElasticFamily{{{}, {kElasticLinePreset}, {kElasticShapePreset}}});
  return plan;
}

namespace {

void check_range(const Range& r, const char* what) {
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi)
    throw PlanError(std::string("invalid range for ") + what);
}

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0))
    throw PlanError(std::string(what) + " must be a probability in [0, 1]");
}

std::size_t discrete_size(const Family& f) {
  if (const auto* h = std::get_if<HomeomorphismFamily>(&f))
    return h->choices.size();
  if (const auto* e = std::get_if<ElasticFamily>(&f))
    return e->choices.size();
  return 0;
}

} // namespace

void validate(const AugmentationPlan& plan) {
  if (plan.per_original < 1)
    throw PlanError("per_original must be >= 1");
  if (plan.families.empty())
    throw PlanError("plan needs at least one family");
  if (!(plan.split_ratio >= 0.0 && plan.split_ratio <= 1.0))
    throw PlanError("split_ratio must be in [0, 1]");
  if (plan.canvas.target_size < 16)
    throw PlanError("canvas.target_size must be >= 16");

  for (const auto& family : plan.families) {
    std::visit(
        [](const auto& f) {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, AffineFamily>) {
            check_range(f.rotation, "affine rotation");
            check_range(f.scale, "affine scale");
            check_range(f.aspect, "affine aspect");
            check_range(f.translate_x, "affine translate_x");
            check_range(f.translate_y, "affine translate_y");
            if (f.scale.lo <= 0 || f.aspect.lo <= 0)
              throw PlanError("affine scale and aspect ranges must be positive");
            check_probability(f.flip_x_probability, "flip_x");
            check_probability(f.flip_y_probability, "flip_y");
          } else if constexpr (std::is_same_v<T, SkewFamily>) {
            check_range(f.shear_x, "skew shear_x");
            check_range(f.shear_y, "skew shear_y");
            const double worst = std::max(std::abs(f.shear_x.lo), std::abs(f.shear_x.hi)) *
                                 std::max(std::abs(f.shear_y.lo), std::abs(f.shear_y.hi));
            if (worst >= 0.5)
              throw PlanError("skew ranges allow a near-singular shear");
          } else if constexpr (std::is_same_v<T, HomeomorphismFamily>) {
            if (f.choices.empty())
              throw PlanError("homeomorphism family needs at least one choice");
            for (const auto& c : f.choices)
              if (c) {
                try {
                  validate(*c);
                } catch (const InvalidSpec& e) {
                  throw PlanError(std::string("homeomorphism choice: ") + e.what());
                }
              }
          } else if constexpr (std::is_same_v<T, ElasticFamily>) {
            if (f.choices.empty())
              throw PlanError("elastic family needs at least one choice");
            for (const auto& c : f.choices)
              for (const auto& spec : c) {
                try {
                  validate(spec);
                } catch (const InvalidSpec& e) {
                  throw PlanError(std::string("elastic choice: ") + e.what());
                }
              }
          }
        },
        family);
  }
}

std::string make_example_id(const std::string& source_id, int variant) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03d", variant);
  return source_id + "_" + buf;
}

std::vector<PlanEntry> expand_plan(const AugmentationPlan& plan,
                                   const std::vector<StageTuple>& originals) {
  validate(plan);
  if (originals.empty())
    throw PlanError("empty plan: no originals to augment");

  std::set<std::string> ids;
  for (const auto& t : originals)
    if (!ids.insert(t.id).second)
      throw PlanError("duplicate original id '" + t.id + "'");

  std::vector<PlanEntry> entries;
  entries.reserve(originals.size() * static_cast<std::size_t>(plan.per_original));
  for (const auto& original : originals) {
    const std::uint64_t source_key = mix_keys(plan.master_seed, fnv1a(original.id));
    for (int k = 0; k < plan.per_original; ++k) {
      PlanEntry entry;
      entry.source_id = original.id;
      entry.variant = k;
      entry.example_id = make_example_id(original.id, k);
      entry.seed = mix_keys(source_key, static_cast<std::uint64_t>(k));

      if (plan.include_identity && k == 0) {
        entry.chain = Transform::identity();
        entries.push_back(std::move(entry));
        continue;
      }

      std::size_t stratum = static_cast<std::size_t>(plan.include_identity ? k - 1 : k);
      SplitMix64 rng(entry.seed);
      std::uint64_t elastic_index = 0;
      for (const auto& family : plan.families) {
        std::size_t choice = 0;
        if (const std::size_t n = discrete_size(family)) {
          choice = stratum % n;
          stratum /= n;
        }
        std::visit(
            [&](const auto& f) {
              using T = std::decay_t<decltype(f)>;
              if constexpr (std::is_same_v<T, AffineFamily>) {
                Affine a;
                a.rotation = f.rotation.sample(rng);
                const double scale = f.scale.sample(rng);
                const double aspect = f.aspect.sample(rng);
                a.scale_x = scale * aspect;
                a.scale_y = scale / aspect;
                a.translate_x = f.translate_x.sample(rng);
                a.translate_y = f.translate_y.sample(rng);
                a.flip_x = rng.bernoulli(f.flip_x_probability);
                a.flip_y = rng.bernoulli(f.flip_y_probability);
                entry.chain.steps.emplace_back(WarpSpec(a));
              } else if constexpr (std::is_same_v<T, SkewFamily>) {
                entry.chain.steps.emplace_back(
                    WarpSpec(Skew{f.shear_x.sample(rng), f.shear_y.sample(rng)}));
              } else if constexpr (std::is_same_v<T, HomeomorphismFamily>) {
                if (f.choices[choice])
                  entry.chain.steps.emplace_back(*f.choices[choice]);
              } else if constexpr (std::is_same_v<T, ElasticFamily>) {
                for (ElasticSpec spec : f.choices[choice]) {
                  spec.seed = mix_keys(entry.seed, 0xE1A5'0000ULL + elastic_index++);
                  entry.chain.steps.emplace_back(spec);
                }
              }
            },
            family);
      }
      if (entry.chain.steps.empty())
        entry.chain = Transform::identity();
      entries.push_back(std::move(entry));
    }
  }
  return entries;
}

// ---------------------------------------------------------------------------
// Config files

namespace {

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (const auto& item : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return item.key() == k; });
    if (!known)
      throw PlanError("unknown key '" + item.key() + "' in " + where);
  }
}

Range read_range(const json& obj, const char* key, Range fallback) {
  if (!obj.contains(key))
    return fallback;
  const json& v = obj.at(key);
  if (v.is_number())
    return {v.get<double>(), v.get<double>()};
  if (v.is_array() && v.size() == 2)
    return {v.at(0).get<double>(), v.at(1).get<double>()};
  throw PlanError(std::string("'") + key + "' must be a number or a [lo, hi] pair");
}

json range_json(const Range& r) {
  return json::array({r.lo, r.hi});
}

ElasticSpec elastic_template(const std::string& text) {
  if (text == "line")
    return kElasticLinePreset;
  if (text == "shape")
    return kElasticShapePreset;
  return parse_elastic(text);
}

Family read_family(const json& f) {
  if (!f.is_object() || !f.contains("kind"))
    throw PlanError("each family needs a 'kind'");
  const std::string kind = f.at("kind").get<std::string>();
  if (kind == "affine") {
    reject_unknown_keys(f, {"kind", "rotation", "scale", "aspect", "translate_x", "translate_y",
                            "flip_x", "flip_y"},
                        "affine family");
    AffineFamily a;
    a.rotation = read_range(f, "rotation", a.rotation);
    a.scale = read_range(f, "scale", a.scale);
    a.aspect = read_range(f, "aspect", a.aspect);
    a.translate_x = read_range(f, "translate_x", a.translate_x);
    a.translate_y = read_range(f, "translate_y", a.translate_y);
    a.flip_x_probability = f.value("flip_x", a.flip_x_probability);
    a.flip_y_probability = f.value("flip_y", a.flip_y_probability);
    return a;
  }
  if (kind == "skew") {
    reject_unknown_keys(f, {"kind", "shear_x", "shear_y"}, "skew family");
    SkewFamily s;
    s.shear_x = read_range(f, "shear_x", s.shear_x);
    s.shear_y = read_range(f, "shear_y", s.shear_y);
    return s;
  }
  if (kind == "homeomorphism") {
    reject_unknown_keys(f, {"kind", "choices"}, "homeomorphism family");
    HomeomorphismFamily h;
    for (const auto& c : f.at("choices")) {
      const std::string text = c.get<std::string>();
      if (text == "none")
        h.choices.emplace_back(std::nullopt);
      else
        h.choices.emplace_back(parse_warp(text));
    }
    return h;
  }
  if (kind == "elastic") {
    reject_unknown_keys(f, {"kind", "choices"}, "elastic family");
    ElasticFamily e;
    for (const auto& c : f.at("choices")) {
      std::vector<ElasticSpec> specs;
      if (c.is_string()) {
        if (c.get<std::string>() != "none")
          specs.push_back(elastic_template(c.get<std::string>()));
      } else {
        for (const auto& s : c)
          specs.push_back(elastic_template(s.get<std::string>()));
      }
      e.choices.push_back(std::move(specs));
    }
    return e;
  }
  throw PlanError("unknown family kind '" + kind + "'");
}

json family_json(const Family& family) {
  return std::visit(
      [](const auto& f) -> json {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, AffineFamily>) {
          return {{"kind", "affine"},
                  {"rotation", range_json(f.rotation)},
                  {"scale", range_json(f.scale)},
                  {"aspect", range_json(f.aspect)},
                  {"translate_x", range_json(f.translate_x)},
                  {"translate_y", range_json(f.translate_y)},
                  {"flip_x", f.flip_x_probability},
                  {"flip_y", f.flip_y_probability}};
        } else if constexpr (std::is_same_v<T, SkewFamily>) {
          return {{"kind", "skew"},
                  {"shear_x", range_json(f.shear_x)},
                  {"shear_y", range_json(f.shear_y)}};
        } else if constexpr (std::is_same_v<T, HomeomorphismFamily>) {
          json choices = json::array();
          for (const auto& c : f.choices)
            choices.push_back(c ? to_string(*c) : "none");
          return {{"kind", "homeomorphism"}, {"choices", choices}};
        } else {
          json choices = json::array();
          for (const auto& c : f.choices) {
            json list = json::array();
            for (ElasticSpec spec : c) {
              spec.seed = 0;
              list.push_back(to_string(spec));
            }
            choices.push_back(list);
          }
          return {{"kind", "elastic"}, {"choices", choices}};
        }
      },
      family);
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

StageTuple read_tuple(const json& t, const fs::path& base) {
  reject_unknown_keys(t, {"id", "a", "b", "c"}, "originals entry");
  StageTuple tuple{t.at("id").get<std::string>(), resolve(base, t.at("a").get<std::string>()),
                   resolve(base, t.at("b").get<std::string>()), std::nullopt};
  if (t.contains("c"))
    tuple.stage_c = resolve(base, t.at("c").get<std::string>());
  return tuple;
}

} // namespace

DatasetConfig dataset_config_from_json(const json& j, const fs::path& base_dir) {
  try {
    if (!j.is_object())
      throw PlanError("config must be a JSON object");
    reject_unknown_keys(j, {"master_seed", "per_original", "include_identity", "split_ratio",
                            "canvas", "originals", "families", "directions", "accept_list",
                            "reject_list", "sheet"},
                        "config");
    DatasetConfig config;
    AugmentationPlan& plan = config.plan;
    plan.master_seed = j.value("master_seed", std::uint64_t{0});
    plan.per_original = j.value("per_original", 72);
    plan.include_identity = j.value("include_identity", true);
    plan.split_ratio = j.value("split_ratio", 0.9);

    if (j.contains("canvas")) {
      const json& c = j.at("canvas");
      reject_unknown_keys(c, {"target_size", "pad_value", "resample"}, "canvas");
      plan.canvas.target_size = c.value("target_size", 256);
      plan.canvas.pad_value = static_cast<std::uint8_t>(c.value("pad_value", 255));
      const std::string resample = c.value("resample", std::string("bilinear"));
      if (resample == "bilinear")
        plan.canvas.resample = Resample::Bilinear;
      else if (resample == "nearest")
        plan.canvas.resample = Resample::Nearest;
      else
        throw PlanError("canvas.resample must be 'bilinear' or 'nearest'");
    }

    if (j.contains("families")) {
      for (const auto& f : j.at("families"))
        plan.families.push_back(read_family(f));
    } else {
      plan.families = default_plan().families;
    }

    if (j.contains("originals")) {
      const json& o = j.at("originals");
      if (o.is_string()) {
        config.originals = discover_tuples(resolve(base_dir, o.get<std::string>()));
      } else if (o.is_object()) {
        reject_unknown_keys(o, {"dir"}, "originals");
        config.originals = discover_tuples(resolve(base_dir, o.at("dir").get<std::string>()));
      } else {
        for (const auto& t : o)
          config.originals.push_back(read_tuple(t, base_dir));
      }
    }

    if (j.contains("directions"))
      for (const auto& d : j.at("directions")) {
        const std::string dir = d.get<std::string>();
        if (dir != "ab" && dir != "bc" && dir != "ac")
          throw PlanError("direction must be one of ab, bc, ac; got '" + dir + "'");
        config.directions.push_back(dir);
      }
    if (j.contains("accept_list"))
      config.accept_list = resolve(base_dir, j.at("accept_list").get<std::string>());
    if (j.contains("reject_list"))
      config.reject_list = resolve(base_dir, j.at("reject_list").get<std::string>());
    if (j.contains("sheet")) {
      const json& s = j.at("sheet");
      reject_unknown_keys(s, {"cols", "rows"}, "sheet");
      config.sheet_cols = s.value("cols", config.sheet_cols);
      config.sheet_rows = s.value("rows", config.sheet_rows);
      if (config.sheet_cols < 1 || config.sheet_rows < 1)
        throw PlanError("sheet grid must be at least 1x1");
    }
    validate(plan);
    return config;
  } catch (const json::exception& e) {
    throw PlanError(std::string("config: ") + e.what());
  } catch (const InvalidSpec& e) {
    throw PlanError(std::string("config: ") + e.what());
  }
}

DatasetConfig load_dataset_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot read config '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw PlanError("config '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return dataset_config_from_json(j, path.parent_path());
}

json to_json(const DatasetConfig& config) {
  const AugmentationPlan& plan = config.plan;
  json families = json::array();
  for (const auto& f : plan.families)
    families.push_back(family_json(f));
  json originals = json::array();
  for (const auto& t : config.originals) {
    json o = {{"id", t.id}, {"a", t.stage_a.string()}, {"b", t.stage_b.string()}};
    if (t.stage_c)
      o["c"] = t.stage_c->string();
    originals.push_back(o);
  }
  json j = {
      {"master_seed", plan.master_seed},
      {"per_original", plan.per_original},
      {"include_identity", plan.include_identity},
      {"split_ratio", plan.split_ratio},
      {"canvas",
       {{"target_size", plan.canvas.target_size},
        {"pad_value", plan.canvas.pad_value},
        {"resample", plan.canvas.resample == Resample::Bilinear ? "bilinear" : "nearest"}}},
      {"families", families},
      {"originals", originals},
      {"directions", config.directions},
      {"sheet", {{"cols", config.sheet_cols}, {"rows", config.sheet_rows}}},
  };
  if (config.accept_list)
    j["accept_list"] = config.accept_list->string();
  if (config.reject_list)
    j["reject_list"] = config.reject_list->string();
  return j;
}

} // namespace inkwarp
