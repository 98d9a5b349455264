// SPDX-License-Identifier: Apache-2.0
//
// Microbenchmarks with google-benchmark's complexity fitting. The tree build
// should report O(N); the AHC oracle on the Baire matrix O(N^2) or worse.

#include <benchmark/benchmark.h>

#include <vector>

#include "baire/baire_tree.hpp"
#include "baire/dendrogram.hpp"
#include "baire/synth.hpp"

namespace {

const std::vector<double>& redshifts() {
  static const std::vector<double> values = [] {
    baire::SynthConfig config;
    config.n = 1 << 20;
    std::vector<double> out;
    for (const auto& r : baire::generate_catalog(config)) {
      out.push_back(r.z_spec);
    }
    return out;
  }();
  return values;
}

void BM_Encode(benchmark::State& state) {
  const auto& values = redshifts();
  const baire::BaireParams params;
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(baire::encode(values[i++ & (values.size() - 1)], params));
  }
}
BENCHMARK(BM_Encode);

void BM_TreeBuild(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::span<const double> values(redshifts().data(), n);
  for (auto _ : state) {
    auto tree = baire::BaireTree::build(values, baire::BaireParams{});
    benchmark::DoNotOptimize(tree.node_count());
  }
  state.SetComplexityN(state.range(0));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_TreeBuild)->RangeMultiplier(4)->Range(1 << 12, 1 << 20)->Complexity(benchmark::oN);

void BM_AhcSingleLinkage(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::span<const double> values(redshifts().data(), n);
  const baire::BaireParams params;
  for (auto _ : state) {
    const auto matrix = baire::baire_distance_matrix(values, params);
    auto dendrogram = baire::agglomerate(matrix, baire::Linkage::kSingle);
    benchmark::DoNotOptimize(dendrogram.merges().data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AhcSingleLinkage)
    ->DenseRange(250, 2000, 250)
    ->Complexity(benchmark::oNSquared)
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
