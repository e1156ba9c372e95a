#include "inkwarp/elastic.hpp"
#include "inkwarp/postprocess.hpp"
#include "inkwarp/synth.hpp"
#include "inkwarp/transform.hpp"
#include "inkwarp/warp.hpp"

#include <benchmark/benchmark.h>

using namespace inkwarp;

namespace {

const GrayImage& drawing() {
  static const GrayImage img = synth_drawing(Character::Giraffe, 1).c.value();
  return img;
}

void BM_ApplyWarp(benchmark::State& state) {
  const WarpSpec spec = parse_warp("compose[affine(rot=0.05,sx=0.95);daisy(p=1.6);xstretch()]");
  for (auto _ : state)
    benchmark::DoNotOptimize(apply_warp(drawing(), spec, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_ApplyWarp)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_GenerateField(benchmark::State& state) {
  const ElasticSpec spec{24, static_cast<double>(state.range(0)), 7};
  for (auto _ : state)
    benchmark::DoNotOptimize(generate_field(256, 256, spec));
}
BENCHMARK(BM_GenerateField)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_Transform(benchmark::State& state) {
  const Transform t = parse_transform("compose[affine(rot=0.05);ystretch();elastic()]", 3);
  for (auto _ : state)
    benchmark::DoNotOptimize(apply_transform(drawing(), t));
}
BENCHMARK(BM_Transform)->Unit(benchmark::kMillisecond);

void BM_GaussianBlur(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(gaussian_blur(drawing(), 1.0));
}
BENCHMARK(BM_GaussianBlur)->Unit(benchmark::kMicrosecond);

void BM_Otsu(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(otsu_threshold(drawing()));
}
BENCHMARK(BM_Otsu)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
