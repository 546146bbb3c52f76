#include <benchmark/benchmark.h>

#include <vector>

#include "msdet/fusion.hpp"
#include "msdet/geometry.hpp"
#include "msdet/rng.hpp"

namespace {

std::vector<msdet::Box> random_boxes(std::size_t n, std::uint64_t seed) {
  msdet::Rng rng(seed);
  std::vector<msdet::Box> boxes;
  boxes.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    boxes.emplace_back(rng.uniform(0, 600), rng.uniform(0, 480), rng.uniform(5, 80),
                       rng.uniform(10, 160));
  return boxes;
}

void BM_Iou(benchmark::State& state) {
  const auto boxes = random_boxes(1024, 7);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& a = boxes[i % boxes.size()];
    const auto& b = boxes[(i * 7 + 3) % boxes.size()];
    benchmark::DoNotOptimize(msdet::iou(a, b));
    ++i;
  }
}
BENCHMARK(BM_Iou);

void BM_Nms(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  msdet::Rng rng(11);
  std::vector<msdet::Detection> dets;
  for (const auto& box : random_boxes(n, 13))
    dets.push_back(msdet::Detection{"f", box, rng.uniform(0.01, 0.99), {}});
  for (auto _ : state) benchmark::DoNotOptimize(msdet::nms(dets, 0.5));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Nms)->Range(32, 512)->Complexity();

void BM_FuseScores(benchmark::State& state) {
  msdet::Rng rng(17);
  msdet::StreamLogits sl{{rng.uniform(-4, 4), rng.uniform(-4, 4)},
                         msdet::LogitPair{rng.uniform(-4, 4), rng.uniform(-4, 4)},
                         msdet::LogitPair{rng.uniform(-4, 4), rng.uniform(-4, 4)},
                         msdet::LogitPair{rng.uniform(-4, 4), rng.uniform(-4, 4)}};
  for (auto _ : state) benchmark::DoNotOptimize(msdet::fuse_scores(sl));
}
BENCHMARK(BM_FuseScores);

}  // namespace
