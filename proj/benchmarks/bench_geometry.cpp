#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "scenelint/geometry.hpp"

using namespace scenelint;

namespace {

std::vector<Obb> random_boxes(std::size_t n, bool rotated) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> pos(-2.0, 2.0);
  std::uniform_real_distribution<double> half(0.05, 1.5);
  std::uniform_real_distribution<double> yaw(0.0, 360.0);
  std::vector<Obb> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({{pos(rng), pos(rng)}, {half(rng), half(rng)}, rotated ? yaw(rng) : 0.0});
  return out;
}

void BM_SatPenetration(benchmark::State& state) {
  const auto boxes = random_boxes(1024, true);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sat_penetration(boxes[i & 1023], boxes[(i + 1) & 1023]));
    ++i;
  }
}
BENCHMARK(BM_SatPenetration);

void BM_AabbOverlap(benchmark::State& state) {
  const auto boxes = random_boxes(1024, true);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(aabb_overlap_amount(aabb_of(boxes[i & 1023]), aabb_of(boxes[(i + 1) & 1023])));
    ++i;
  }
}
BENCHMARK(BM_AabbOverlap);

}  // namespace
