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

#ifndef MIAUDIT_TESTS_ACCEPTANCE_OVERFIT_BENCHMARK_H_
#define MIAUDIT_TESTS_ACCEPTANCE_OVERFIT_BENCHMARK_H_

#include <map>
#include <memory>
#include <vector>

#include "absl/status/statusor.h"
#include "miaudit/model.h"
#include "miaudit/out_world.h"
#include "miaudit/population.h"
#include "miaudit/seed.h"
#include "miaudit/smoothing.h"
#include "miaudit/threshold_fn.h"
#include "miaudit/trainer.h"

namespace miaudit::acceptance {

struct OverfitBenchmarkConfig {
  int dim = 16;
  int classes = 4;
  size_t pool_size = 6000;
  double class_scale = 1.0;
  size_t n = 64;
  TrainConfig train;
  int num_targets = 10;
  // Targets share one training set (fresh training seeds only).
  bool shared_dataset = false;
  int num_shadow = 200;
  int num_reference = 200;
  int num_distilled = 200;
  size_t shadow_eval_per_class = 50;
  size_t population_per_class = 50;
  size_t distill_size = 64;
  // Skip building the distilled out worlds.
  bool skip_distilled = false;
  SmoothingMethod method = SmoothingMethod::kLogitRescale;
  int workers = 1;
};

OverfitBenchmarkConfig DefaultOverfitConfig();

struct TargetCase {
  std::shared_ptr<ToyModel> model;
  Dataset dataset;
  // Members first, then an equal number of non-members.
  std::vector<RecordId> eval_ids;
  std::vector<int> truths;
};

struct OverfitBenchmark {
  PopulationPool pool;
  std::vector<TargetCase> targets;
  OutWorldSet shadow;
  OutWorldSet reference;
  std::vector<OutWorldSet> population;
  std::vector<OutWorldSet> distilled;
  std::map<AttackKind, ThresholdFn> fns;
};

absl::StatusOr<OverfitBenchmark> BuildOverfitBenchmark(
    const OverfitBenchmarkConfig& config, const SeedSpec& seed);

// Score-sweep AUC of each calibrated attack over every target's members and
// non-members, pooled.
absl::StatusOr<std::map<AttackKind, double>> AttackAucs(
    const OverfitBenchmark& bench);

}  // namespace miaudit::acceptance

#endif  // MIAUDIT_TESTS_ACCEPTANCE_OVERFIT_BENCHMARK_H_
