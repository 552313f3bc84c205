#include <benchmark/benchmark.h>

#include <random>

#include "fixtures.hpp"
#include "scenelint/verifiers.hpp"

using namespace scenelint;

namespace {

void BM_Evaluate(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::vector<SceneLayout> scenes;
  for (int i = 0; i < 64; ++i) scenes.push_back(fixtures::random_layout(rng, static_cast<int>(state.range(0))));
  const EvalParams params;
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate(scenes[i++ & 63], nullptr, fixtures::ontology(), params));
  }
}
BENCHMARK(BM_Evaluate)->Arg(6)->Arg(24)->Arg(96);

}  // namespace
