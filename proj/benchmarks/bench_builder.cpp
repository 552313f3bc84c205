#include <benchmark/benchmark.h>

#include <random>

#include "fixtures.hpp"
#include "scenelint/builder.hpp"

using namespace scenelint;

namespace {

void BM_BuildOntology(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto scenes = fixtures::synthetic_corpus(rng, static_cast<int>(state.range(0)));
  BuildOptions opt;
  opt.shards = 4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_ontology(std::span<const CorpusScene>(scenes), opt));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildOntology)->Arg(100)->Arg(1000);

}  // namespace
