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

#ifndef MIAUDIT_TRAINER_H_
#define MIAUDIT_TRAINER_H_

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "miaudit/model.h"
#include "miaudit/population.h"
#include "miaudit/seed.h"

namespace miaudit {

struct TrainConfig {
  // 0 gives multinomial logistic regression.
  int hidden_width = 16;
  int epochs = 1;
  int batch_size = 32;
  double learning_rate = 0.1;
  // Per-step clipping of the global (all-parameter) gradient L2 norm.
  std::optional<double> clip_norm;
  // Weights start at weight_init_scale * N(0, 1) / sqrt(fan_in); biases at 0.
  double weight_init_scale = 1.0;
  SeedSpec seed;
};

absl::Status ValidateTrainConfig(const TrainConfig& config);

// Parameters before the first update, drawn from config.seed/"init".
ToyModel InitModel(int dim, int classes, const TrainConfig& config);

// One SGD update, reported to an optional observer.
struct TrainStep {
  int epoch = 0;
  int step = 0;
  // Gradient norm before and after clipping.
  double grad_norm = 0.0;
  double applied_norm = 0.0;
};
using TrainObserver = std::function<void(const TrainStep&)>;

// A training example: features plus a target distribution over classes
// (one-hot for hard labels).
struct Example {
  std::span<const double> x;
  std::span<const double> target;
};

// Mean cross-entropy H(target, softmax(logits)) over `batch`. Writes the
// gradient with respect to model.params() into `grad` (overwritten).
double BatchLossAndGradient(const ToyModel& model,
                            std::span<const Example> batch,
                            std::span<double> grad);

// Mini-batch SGD on mean cross-entropy against per-example target
// distributions. Epoch e visits examples in the order of a Fisher-Yates
// permutation drawn from config.seed/"epoch":e. Fails with a
// training-diverged error if any parameter becomes non-finite.
absl::StatusOr<ToyModel> TrainOnTargets(
    const PopulationPool& pool, std::span<const RecordId> ids,
    std::span<const std::vector<double>> targets, const TrainConfig& config,
    const TrainObserver* observer = nullptr);

// Hard-label training on `dataset`.
absl::StatusOr<ToyModel> Train(const PopulationPool& pool,
                               const Dataset& dataset,
                               const TrainConfig& config,
                               const TrainObserver* observer = nullptr);

struct SoftLabel {
  RecordId id = 0;
  std::vector<double> probs;
};

// Pairs every id with model.PredictProba of its record.
absl::StatusOr<std::vector<SoftLabel>> SoftLabelRecords(
    const ToyModel& model, const PopulationPool& pool,
    std::span<const RecordId> ids);

// Distills `teacher`: samples n records (seed/"dataset", never from
// `exclude`), labels them with the teacher's probability vectors and trains
// a fresh model on the full soft targets (config.seed is replaced by
// seed/"train").
absl::StatusOr<ToyModel> Distill(const ToyModel& teacher,
                                 const PopulationPool& pool, size_t n,
                                 const TrainConfig& config,
                                 const SeedSpec& seed,
                                 const IdSet& exclude = {});

// Same as Distill but also returns the distillation dataset.
absl::StatusOr<ToyModel> Distill(const ToyModel& teacher,
                                 const PopulationPool& pool, size_t n,
                                 const TrainConfig& config,
                                 const SeedSpec& seed, const IdSet& exclude,
                                 Dataset* distillation_set);

}  // namespace miaudit

#endif  // MIAUDIT_TRAINER_H_
