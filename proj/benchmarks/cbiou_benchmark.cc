// Copyright 2026 The cbiou Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>
#include "cbiou/assignment.h"
#include "cbiou/box.h"
#include "cbiou/similarity.h"
#include "cbiou/synth.h"
#include "cbiou/tracker.h"

namespace cbiou {
namespace {

std::vector<BoundingBox> RandomBoxes(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(0.0, 1000.0);
  std::uniform_real_distribution<double> ext(20.0, 100.0);
  std::vector<BoundingBox> boxes;
  boxes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    boxes.emplace_back(pos(rng), pos(rng), ext(rng), ext(rng));
  }
  return boxes;
}

void BM_Biou(benchmark::State& state) {
  const std::vector<BoundingBox> boxes = RandomBoxes(1024, 1);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        Biou(boxes[i & 1023], boxes[(i + 1) & 1023], 0.3));
    ++i;
  }
}
BENCHMARK(BM_Biou);

void BM_SolveAssignment(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> sim(0.0, 1.0);
  std::vector<double> values(n * n);
  for (double& v : values) v = sim(rng);
  const SimilarityMatrix matrix(n, n, values);
  for (auto _ : state) benchmark::DoNotOptimize(SolveAssignment(matrix));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveAssignment)->RangeMultiplier(2)->Range(4, 128)->Complexity();

void BM_TrackerStep(benchmark::State& state) {
  ScenarioSpec spec;
  spec.num_objects = static_cast<int>(state.range(0));
  spec.num_frames = 500;
  spec.speed = {2.0, 12.0};
  spec.turn_prob = 0.05;
  spec.seed = 3;
  const Scenario scenario = Generate(spec);
  for (auto _ : state) {
    Tracker tracker{TrackerConfig{}};
    for (const auto& [frame, dets] : scenario.detections) {
      benchmark::DoNotOptimize(tracker.Step(frame, dets));
    }
  }
  state.SetItemsProcessed(state.iterations() * spec.num_frames);
}
BENCHMARK(BM_TrackerStep)->Arg(5)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace cbiou

BENCHMARK_MAIN();
