// Copyright 2026 The Navsim Authors.
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

#include <random>
#include <vector>

#include "benchmark/benchmark.h"
#include "navsim/engine.h"
#include "navsim/landmarks.h"
#include "navsim/memory.h"
#include "navsim/routegen.h"
#include "navsim/synthworld.h"

namespace navsim {
namespace {

World MakeWorld(int side) {
  WorldSpec spec;
  spec.rows = side;
  spec.cols = side;
  return GenerateWorld(spec);
}

void BM_ShortestRoute(benchmark::State& state) {
  const World w = MakeWorld(static_cast<int>(state.range(0)));
  const auto n = static_cast<NodeId>(w.graph.num_nodes());
  std::mt19937_64 rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ShortestRoute(w.graph, rng() % n, rng() % n));
  }
}
BENCHMARK(BM_ShortestRoute)->Arg(10)->Arg(22)->Arg(50);

Route LongRoute(const World& w) {
  const auto n = static_cast<NodeId>(w.graph.num_nodes());
  return ShortestRoute(w.graph, 0, n - 1);
}

void BM_SelectGreedy(benchmark::State& state) {
  const World w = MakeWorld(static_cast<int>(state.range(0)));
  const Route r = LongRoute(w);
  const HashRankScorer scorer;
  const auto inter = Intersections(w.graph);
  for (auto _ : state) {
    benchmark::DoNotOptimize(SelectGreedy(w.graph, r, {}, scorer, inter));
  }
}
BENCHMARK(BM_SelectGreedy)->Arg(8)->Arg(20)->Arg(40);

void BM_SelectExact(benchmark::State& state) {
  const World w = MakeWorld(static_cast<int>(state.range(0)));
  const Route r = LongRoute(w);
  const HashRankScorer scorer;
  const auto inter = Intersections(w.graph);
  for (auto _ : state) {
    benchmark::DoNotOptimize(SelectExact(w.graph, r, {}, scorer, inter));
  }
}
BENCHMARK(BM_SelectExact)->Arg(5)->Arg(8);

void BM_MemoryAppend(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> heading(0, 360);
  GeoPoint here{40.7, -74.0};
  MemoryImage m = MemoryImage::Init(here);
  for (auto _ : state) {
    here = Destination(here, heading(rng), 50.0);
    m.Append(here);
  }
}
BENCHMARK(BM_MemoryAppend);

void BM_OracleEpisode(benchmark::State& state) {
  const World w = GenerateWorld({});
  const SynthEpisode e = GenerateEpisode(w, static_cast<int>(state.range(0)), 1);
  const EpisodeSpec spec = e.ToSpec();
  for (auto _ : state) {
    AgentBundle bundle = MakeBundle("oracle");
    benchmark::DoNotOptimize(RunEpisode(w.environment(), spec, bundle, {}, 0));
  }
}
BENCHMARK(BM_OracleEpisode)->DenseRange(1, 4);

}  // namespace
}  // namespace navsim

BENCHMARK_MAIN();
