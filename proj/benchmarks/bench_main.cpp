// Copyright 2026 The confsom Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "confsom/clustering.hpp"
#include "confsom/networks.hpp"
#include "confsom/som.hpp"

#include "synthetic.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace confsom;

void BM_MapEnsemble(benchmark::State& state) {
  const auto atoms = static_cast<std::size_t>(state.range(0));
  const Ensemble e = testing::three_state_trajectory(atoms, 1000, 0.1, 1);
  TrainingConfig cfg;
  const SomMap map = init_map(e, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(map_ensemble(map, e).qe);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(e.frames()));
}
BENCHMARK(BM_MapEnsemble)->Arg(30)->Arg(60)->Arg(250);

void BM_BatchEpochs(benchmark::State& state) {
  const Ensemble e = testing::three_state_trajectory(60, 1000, 0.1, 2);
  TrainingConfig cfg;
  cfg.train_len = static_cast<std::size_t>(state.range(0));
  const SomMap start = init_map(e, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(train_batch(start, e, cfg).prototypes().data());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BatchEpochs)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_CompleteLinkage(benchmark::State& state) {
  const Ensemble e = testing::random_ensemble(static_cast<std::size_t>(state.range(0)), 60, 5.0, 3);
  for (auto _ : state) benchmark::DoNotOptimize(complete_linkage(e.coords()).merges.data());
}
BENCHMARK(BM_CompleteLinkage)->Arg(100)->Arg(400);

void BM_SimilarityMatrix(benchmark::State& state) {
  const auto atoms = static_cast<std::size_t>(state.range(0));
  const std::size_t frames = 40;
  const Ensemble e = testing::random_ensemble(frames, atoms, 1.0, 4);
  Assignment a;
  a.bmu.assign(frames, 0);
  a.hits = {frames};
  const AtomSeriesSet s = gather_neuron_series(e, a, 0);
  const auto measure = static_cast<Measure>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(similarity_matrix(s, measure).values.data());
  state.SetLabel(std::string(to_string(measure)));
}
BENCHMARK(BM_SimilarityMatrix)
    ->Args({100, static_cast<int>(Measure::xyz_pearson)})
    ->Args({100, static_cast<int>(Measure::xyz_spearman)})
    ->Args({100, static_cast<int>(Measure::xyz_bicor)})
    ->Args({100, static_cast<int>(Measure::cosine)})
    ->Args({300, static_cast<int>(Measure::xyz_pearson)});

}  // namespace

BENCHMARK_MAIN();
