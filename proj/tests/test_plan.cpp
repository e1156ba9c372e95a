#include "support.hpp"

#include "inkwarp/error.hpp"
#include "inkwarp/manifest.hpp"
#include "inkwarp/plan.hpp"
#include "inkwarp/png_io.hpp"
#include "inkwarp/synth.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace inkwarp;
using namespace inkwarp::testing;
using nlohmann::json;

namespace {

std::vector<StageTuple> fake_originals(int n) {
  std::vector<StageTuple> t;
  for (int i = 0; i < n; ++i) {
    const std::string id = "g" + std::to_string(i);
    t.push_back({id, id + "_A.png", id + "_B.png", fs::path(id + "_C.png")});
  }
  return t;
}

std::string dump(const std::vector<PlanEntry>& entries) {
  std::string s;
  for (const auto& e : entries)
    s += e.example_id + "|" + e.source_id + "|" + to_string(e.chain) + "|" +
         std::to_string(e.seed) + "\n";
  return s;
}

ManifestEntry row(const std::string& id, Status status = Status::Auto) {
  ManifestEntry e;
  e.example_id = id;
  e.source_id = id.substr(0, id.find('_'));
  e.transform_chain = "xstretch()";
  e.seed = 42;
  e.split = split_for(id, 0.9);
  e.outputs = {{"A", "stages/" + id + "_A.png"}, {"B", "stages/" + id + "_B.png"}};
  e.status = status;
  return e;
}

DatasetManifest manifest_of(int n) {
  DatasetManifest m;
  for (int i = 0; i < n; ++i)
    m.entries.push_back(row(make_example_id("g1", i)));
  m.normalize();
  return m;
}

} // namespace

TEST(ExpandPlan, IdentityOnlyPlan) {
  AugmentationPlan plan = default_plan();
  plan.per_original = 1;
  const auto entries = expand_plan(plan, fake_originals(9));
  ASSERT_EQ(entries.size(), 9u);
  for (const auto& e : entries)
    EXPECT_EQ(e.chain, Transform::identity());
}

TEST(ExpandPlan, GiraffeCountsAndUniqueIds) {
  AugmentationPlan plan = default_plan();
  plan.per_original = 45;
  const auto entries = expand_plan(plan, fake_originals(9));
  EXPECT_EQ(entries.size(), 405u);
  std::set<std::string> ids;
  for (const auto& e : entries)
    ids.insert(e.example_id);
  EXPECT_EQ(ids.size(), 405u);
  EXPECT_EQ(entries[46].example_id, "g1_001");
}

TEST(ExpandPlan, DeterministicAndSeedSensitive) {
  AugmentationPlan plan = default_plan();
  plan.master_seed = 7;
  const auto originals = fake_originals(3);
  EXPECT_EQ(dump(expand_plan(plan, originals)), dump(expand_plan(plan, originals)));
  plan.master_seed = 8;
  const auto other = expand_plan(plan, originals);
  plan.master_seed = 7;
  EXPECT_NE(dump(expand_plan(plan, originals)), dump(other));
}

TEST(ExpandPlan, DefaultPlanCoversEveryDiscreteCombination) {
  const AugmentationPlan plan = default_plan();
  EXPECT_EQ(plan.per_original, 72);
  const auto entries = expand_plan(plan, fake_originals(1));
  ASSERT_EQ(entries.size(), 72u);
  std::map<std::string, int> combos;
  for (const auto& e : entries) {
    if (e.variant == 0)
      continue;
    std::string homeo = "none", elastic = "none";
    ASSERT_TRUE(std::holds_alternative<WarpSpec>(e.chain.steps.front()));
    EXPECT_TRUE(std::holds_alternative<Affine>(std::get<WarpSpec>(e.chain.steps.front()).kind));
    for (std::size_t i = 1; i < e.chain.steps.size(); ++i) {
      if (const auto* w = std::get_if<WarpSpec>(&e.chain.steps[i])) {
        homeo = to_string(*w);
      } else {
        const auto& s = std::get<ElasticSpec>(e.chain.steps[i]);
        elastic = s.sigma == kElasticLinePreset.sigma ? "line" : "shape";
        EXPECT_EQ(i, e.chain.steps.size() - 1); // elastic comes last
      }
    }
    ++combos[homeo + "+" + elastic];
  }
  EXPECT_EQ(combos.size(), 9u);
  int total = 0;
  for (const auto& [k, n] : combos) {
    EXPECT_GE(n, 7) << k;
    total += n;
  }
  EXPECT_EQ(total, 71);
}

TEST(ExpandPlan, ElasticSeedsDifferAcrossEntries) {
  const auto entries = expand_plan(default_plan(), fake_originals(2));
  std::set<std::uint64_t> seeds;
  std::size_t n = 0;
  for (const auto& e : entries)
    for (const auto& s : e.chain.steps)
      if (const auto* el = std::get_if<ElasticSpec>(&s)) {
        seeds.insert(el->seed);
        ++n;
      }
  EXPECT_GT(n, 0u);
  EXPECT_EQ(seeds.size(), n);
}

TEST(ExpandPlan, Errors) {
  EXPECT_THROW(expand_plan(default_plan(), {}), PlanError);
  AugmentationPlan plan = default_plan();
  plan.per_original = 0;
  EXPECT_THROW(expand_plan(plan, fake_originals(1)), PlanError);
  plan = default_plan();
  plan.families.clear();
  EXPECT_THROW(expand_plan(plan, fake_originals(1)), PlanError);
  auto dup = fake_originals(2);
  dup[1].id = dup[0].id;
  EXPECT_THROW(expand_plan(default_plan(), dup), PlanError);
}

TEST(ExpandPlan, ChainsRoundTripThroughText) {
  const auto entries = expand_plan(default_plan(), fake_originals(2));
  for (const auto& e : entries)
    EXPECT_EQ(parse_transform(to_string(e.chain)), e.chain) << to_string(e.chain);
}

TEST(DatasetConfig, ParsesFamiliesAndResolvesPaths) {
  TempDir dir;
  write_synth_set(Character::Giraffe, 2, dir / "orig", 64);
  const json j = json::parse(R"j({
    "master_seed": 5, "per_original": 4, "split_ratio": 0.5,
    "canvas": {"target_size": 64},
    "originals": "orig",
    "families": [
      {"kind": "affine", "rotation": 0.1, "flip_x": 0},
      {"kind": "skew", "shear_x": [-0.1, 0.1]},
      {"kind": "homeomorphism", "choices": ["none", "daisy(p=2)"]},
      {"kind": "elastic", "choices": ["none", ["line", "elastic(alpha=3,sigma=5)"]]}
    ],
    "directions": ["ab", "ac"],
    "reject_list": "reject.txt",
    "sheet": {"cols": 3, "rows": 2}
  })j");
  const DatasetConfig c = dataset_config_from_json(j, dir.path());
  EXPECT_EQ(c.plan.master_seed, 5u);
  EXPECT_EQ(c.plan.canvas.target_size, 64);
  ASSERT_EQ(c.originals.size(), 2u);
  EXPECT_EQ(c.originals[0].id, "giraffe01");
  EXPECT_TRUE(c.originals[0].has_c());
  ASSERT_EQ(c.plan.families.size(), 4u);
  const auto& el = std::get<ElasticFamily>(c.plan.families[3]);
  ASSERT_EQ(el.choices.size(), 2u);
  EXPECT_EQ(el.choices[1].size(), 2u);
  EXPECT_EQ(*c.reject_list, dir / "reject.txt");
  EXPECT_EQ(c.sheet_cols, 3);
  // The resolved form reloads to the same plan.
  const DatasetConfig again = dataset_config_from_json(to_json(c), dir.path());
  EXPECT_EQ(to_json(again), to_json(c));
}

TEST(DatasetConfig, RejectsBadInput) {
  TempDir dir;
  const auto bad = [&](const char* text) {
    return dataset_config_from_json(json::parse(text), dir.path());
  };
  EXPECT_THROW(bad(R"({"per_original": 3, "colour": 1})"), PlanError);
  EXPECT_THROW(bad(R"({"per_original": 0})"), PlanError);
  EXPECT_THROW(bad(R"({"families": [{"kind": "twirl"}]})"), PlanError);
  EXPECT_THROW(bad(R"j({"families": [{"kind": "homeomorphism", "choices": ["bogus()"]}]})j"),
               PlanError);
  EXPECT_THROW(bad(R"({"families": [{"kind": "affine", "scale": [0, 1]}]})"), PlanError);
  EXPECT_THROW(bad(R"({"originals": "nowhere"})"), PlanError);
  EXPECT_THROW(bad(R"({"directions": ["ba"]})"), PlanError);
  EXPECT_THROW(bad(R"({"per_original": "many"})"), PlanError);
  EXPECT_THROW(load_dataset_config(dir / "missing.json"), IoError);
  write_file(dir / "broken.json", "{not json");
  EXPECT_THROW(load_dataset_config(dir / "broken.json"), PlanError);
}

TEST(StageTuples, DiscoverAndLoad) {
  TempDir dir;
  write_synth_set(Character::Flower, 3, dir.path(), 64);
  write_file(dir / "notes.txt", "ignored");
  const auto tuples = discover_tuples(dir.path());
  ASSERT_EQ(tuples.size(), 3u);
  EXPECT_EQ(tuples[2].id, "flower03");
  EXPECT_FALSE(tuples[0].has_c());
  const StageImages img = load_stage_images(tuples[0], CanvasPolicy{128});
  EXPECT_EQ(img.a.width(), 128);
  EXPECT_TRUE(stage_ink_monotone(img));

  fs::remove(tuples[1].stage_b);
  EXPECT_THROW(discover_tuples(dir.path()), PlanError);
  EXPECT_THROW(discover_tuples(dir / "nope"), PlanError);
}

TEST(StageTuples, NonMonotoneInkIsRejected) {
  TempDir dir;
  GrayImage a(64, 64, 0), b(64, 64);
  save_png(a, dir / "x_A.png");
  save_png(b, dir / "x_B.png");
  const StageTuple t{"x", dir / "x_A.png", dir / "x_B.png", std::nullopt};
  EXPECT_THROW(load_stage_images(t, CanvasPolicy{64}), PlanError);
}

TEST(Split, HashSplitIsStableAndRatioDriven) {
  EXPECT_EQ(split_for("anything", 1.0), Split::Train);
  EXPECT_EQ(split_for("anything", 0.0), Split::Val);
  std::size_t train = 0;
  for (int i = 0; i < 2000; ++i) {
    const std::string id = make_example_id("s" + std::to_string(i % 40), i / 40);
    const Split s = split_for(id, 0.9);
    EXPECT_EQ(split_for(id, 0.9), s);
    const double u = unit_interval(splitmix64(fnv1a(id)));
    EXPECT_EQ(s == Split::Train, u < 0.9);
    train += s == Split::Train;
  }
  EXPECT_NEAR(static_cast<double>(train) / 2000.0, 0.9, 0.03);
}

TEST(Manifest, SerializesSortedKeysAndRoundTrips) {
  DatasetManifest m = manifest_of(3);
  const std::string text = serialize(m);
  const std::string first = text.substr(0, text.find('\n'));
  EXPECT_EQ(first.find("{\"example_id\":"), 0u);
  EXPECT_LT(first.find("\"output_paths\""), first.find("\"seed\""));
  EXPECT_LT(first.find("\"source_id\""), first.find("\"split\""));
  EXPECT_EQ(parse_manifest(text), m);

  TempDir dir;
  write_manifest(m, dir / "m.jsonl");
  EXPECT_EQ(read_manifest(dir / "m.jsonl"), m);
  EXPECT_THROW(read_manifest(dir / "none.jsonl"), IoError);
  EXPECT_THROW(parse_manifest("{\"example_id\": 1}\n"), Error);

  m.entries.push_back(m.entries.front());
  EXPECT_THROW(m.normalize(), Error);
}

TEST(IdLists, CommentsAndBlankLines) {
  EXPECT_EQ(parse_id_list("# header\n a_001 \n\nb_002 # trailing\n#x\n"),
            (std::vector<std::string>{"a_001", "b_002"}));
}

TEST(Curation, RejectSevenOf405Leaves398) {
  DatasetManifest m;
  for (int s = 1; s <= 9; ++s)
    for (int k = 0; k < 45; ++k)
      m.entries.push_back(row(make_example_id("giraffe0" + std::to_string(s), k)));
  m.normalize();
  std::vector<std::string> reject;
  for (int s = 1; s <= 7; ++s)
    reject.push_back(make_example_id("giraffe0" + std::to_string(s), 3 * s));
  const DatasetManifest out = apply_acceptlist(m, {}, reject);
  EXPECT_EQ(out.usable_count(), 398u);
  EXPECT_EQ(out.count(Status::Rejected), 7u);
}

TEST(Curation, EmptyListsAndIdempotence) {
  const DatasetManifest m = manifest_of(5);
  EXPECT_EQ(apply_acceptlist(m, {}, {}), m);
  const std::vector<std::string> acc{"g1_001"}, rej{"g1_002", "g1_003"};
  const DatasetManifest once = apply_acceptlist(m, acc, rej);
  EXPECT_EQ(apply_acceptlist(once, acc, rej), once);
  EXPECT_EQ(apply_acceptlist(once, {}, {"g1_002"}), once);
  EXPECT_EQ(once.find("g1_001")->status, Status::Accepted);
  EXPECT_EQ(once.find("g1_002")->status, Status::Rejected);
  EXPECT_EQ(once.find("g1_000")->status, Status::Auto);
}

TEST(Curation, UnknownAndConflictingIds) {
  const DatasetManifest m = manifest_of(3);
  EXPECT_THROW(apply_acceptlist(m, {"g9_000"}, {}), UnknownId);
  EXPECT_THROW(apply_acceptlist(m, {}, {"g9_000"}), UnknownId);
  EXPECT_THROW(apply_acceptlist(m, {"g1_001"}, {"g1_001"}), CurationConflict);
}
