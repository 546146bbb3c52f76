#include <benchmark/benchmark.h>

#include "msdet/anchors.hpp"
#include "msdet/evaluation.hpp"
#include "msdet/harness.hpp"

namespace {

msdet::SynthConfig bench_config(int frames) {
  msdet::SynthConfig cfg;
  cfg.seed = 404;
  cfg.n_frames = frames;
  cfg.detector.recall = 0.8;
  cfg.detector.fppi_target = 1.0;
  cfg.detector.localization_jitter = 1.0;
  return cfg;
}

void BM_MrFppiCurve(benchmark::State& state) {
  const auto cfg = bench_config(static_cast<int>(state.range(0)));
  const auto ds = msdet::synth_dataset(cfg);
  const auto dets = msdet::synth_detector(ds.frames, cfg);
  for (auto _ : state)
    benchmark::DoNotOptimize(msdet::mr_fppi_curve(ds.frames, dets));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MrFppiCurve)->Range(64, 1024)->Complexity();

void BM_GenerateAnchors(benchmark::State& state) {
  msdet::AnchorSpec spec;
  spec.heights = {50, 60, 70, 80, 90, 100, 110, 120, 130};
  for (auto _ : state)
    benchmark::DoNotOptimize(msdet::generate_anchors(spec, 75, 64));
}
BENCHMARK(BM_GenerateAnchors);

void BM_SynthDataset(benchmark::State& state) {
  const auto cfg = bench_config(256);
  for (auto _ : state) benchmark::DoNotOptimize(msdet::synth_dataset(cfg));
}
BENCHMARK(BM_SynthDataset);

}  // namespace

BENCHMARK_MAIN();
