// Copyright 2026 The MIAudit Authors
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


#include <cstdint>
#include <random>
#include <vector>

#include "benchmark/benchmark.h"
#include "miaudit/empirical_dist.h"
#include "miaudit/population.h"
#include "miaudit/roc.h"
#include "miaudit/seed.h"
#include "miaudit/smoothing.h"
#include "miaudit/trainer.h"

namespace miaudit {
namespace {

// One full training run: n = 64, 30 epochs, batch 16, hidden width = arg.
void BM_Train(benchmark::State& state) {
  const PopulationPool pool =
      *GenPopulation(8, 4, 2000, 1.0, SeedSpec(1).Child("pool"));
  const Dataset d =
      *SampleDataset(pool, 64, WithoutReplacement{}, SeedSpec(1).Child("d"));
  TrainConfig c;
  c.hidden_width = static_cast<int>(state.range(0));
  c.epochs = 30;
  c.batch_size = 16;
  c.seed = SeedSpec(1).Child("train");
  for (auto _ : state) {
    benchmark::DoNotOptimize(Train(pool, d, c));
  }
}
BENCHMARK(BM_Train)->Arg(0)->Arg(16)->Arg(32);

EmpiricalDist RandomDist(size_t size) {
  std::mt19937_64 rng(size);
  std::exponential_distribution<double> e(1.0);
  std::vector<double> losses(size);
  for (double& l : losses) l = e(rng);
  return *EmpiricalDist::Create(std::move(losses));
}

void BM_Percentile(benchmark::State& state) {
  const EmpiricalDist dist = RandomDist(static_cast<size_t>(state.range(1)));
  const auto method = static_cast<SmoothingMethod>(state.range(0));
  state.SetLabel(std::string(SmoothingMethodName(method)));
  double alpha = 0.001;
  for (auto _ : state) {
    benchmark::DoNotOptimize(SmoothedPercentile(dist, alpha, method));
    alpha = alpha < 0.9 ? alpha * 1.1 : 0.001;
  }
}
BENCHMARK(BM_Percentile)
    ->ArgsProduct({{0, 1, 2, 3}, {200, 10000}});

void BM_EmpiricalDistCreate(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::exponential_distribution<double> e(1.0);
  std::vector<double> losses(static_cast<size_t>(state.range(0)));
  for (double& l : losses) l = e(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(EmpiricalDist::Create(losses));
  }
}
BENCHMARK(BM_EmpiricalDistCreate)->Arg(200)->Arg(10000)->Arg(100000);

void BM_RocScoreSweep(benchmark::State& state) {
  const size_t n = static_cast<size_t>(state.range(0));
  std::mt19937_64 rng(n);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> scores(n);
  std::vector<int> truths(n);
  for (size_t i = 0; i < n; ++i) {
    truths[i] = static_cast<int>(i % 2);
    scores[i] = u(rng) + 0.2 * truths[i];
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(RocScoreSweep(scores, truths));
  }
  state.SetComplexityN(static_cast<int64_t>(n));
}
BENCHMARK(BM_RocScoreSweep)->RangeMultiplier(10)->Range(100, 100000)
    ->Complexity();

}  // namespace
}  // namespace miaudit

BENCHMARK_MAIN();
