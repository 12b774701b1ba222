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

#ifndef MIAUDIT_GAME_H_
#define MIAUDIT_GAME_H_

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include "absl/strings/string_view.h"
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "miaudit/model.h"
#include "miaudit/population.h"
#include "miaudit/posterior.h"
#include "miaudit/seed.h"
#include "miaudit/trainer.h"

namespace miaudit {

// The four membership inference games. They differ only in which random
// seeds are fixed across trials:
//
//   kAverageAll      dataset, model and records fresh every trial
//   kFixedModel      dataset and model fixed; records fresh
//   kFixedRecord     target record fixed; dataset and models fresh
//   kFixedWorstCase  target record and dataset fixed; training seeds fresh
enum class GameVariant { kAverageAll, kFixedModel, kFixedRecord, kFixedWorstCase };

absl::string_view GameVariantName(GameVariant v);
absl::StatusOr<GameVariant> ParseGameVariant(absl::string_view name);

// The training algorithm T: a dataset plus a training seed gives a model.
using TrainingAlgorithm = std::function<absl::StatusOr<ToyModel>(
    const Dataset& dataset, const SeedSpec& seed)>;

// SGD training with `config`, its seed replaced per call.
TrainingAlgorithm SgdAlgorithm(const PopulationPool& pool, TrainConfig config);

// One Gibbs-posterior draw per call, its seed replaced per call.
TrainingAlgorithm PosteriorAlgorithm(const PopulationPool& pool,
                                     PosteriorConfig config);

struct GameSpec {
  GameVariant variant = GameVariant::kAverageAll;
  // Training set size.
  size_t n = 0;
  // Required per variant: kFixedModel needs dataset and model seeds,
  // kFixedRecord the record seed, kFixedWorstCase dataset and record seeds.
  std::optional<SeedSpec> fixed_dataset_seed;
  std::optional<SeedSpec> fixed_model_seed;
  std::optional<SeedSpec> fixed_record_seed;
  // Overrides the drawn fixed record (kFixedRecord / kFixedWorstCase).
  std::optional<RecordId> fixed_record_id;
  int trials = 0;
  SeedSpec root_seed;
  // FPR tolerance handed to the adversary.
  double alpha = 0.05;
  int workers = 1;
};

absl::Status ValidateGameSpec(const GameSpec& spec);

// What the challenger sends to the adversary in one trial, together with
// the ground truth kept for scoring.
struct Challenge {
  std::shared_ptr<const ToyModel> model;
  Record record;
  int secret_bit = 0;
  size_t trial_index = 0;
  // Training set of `model`.
  Dataset model_dataset;
  // kFixedRecord / kFixedWorstCase: training sets of theta_0 and theta_1.
  // Only theta_b is trained; both sets are recorded.
  Dataset out_dataset;
  Dataset in_dataset;
};

// Side information the adversary is allowed to use.
struct GameContext {
  const PopulationPool* pool = nullptr;
  GameVariant variant = GameVariant::kAverageAll;
  // kFixedWorstCase: the fixed dataset D (which excludes the target record).
  const Dataset* known_dataset = nullptr;
};

struct AdversaryQuery {
  const Challenge& challenge;
  double alpha;
  const GameContext& context;
};

struct AdversaryAnswer {
  int bit = 0;
  double loss = std::numeric_limits<double>::quiet_NaN();
  double threshold = std::numeric_limits<double>::quiet_NaN();
};

// Must be safe to call concurrently when spec.workers > 1.
using Adversary =
    std::function<absl::StatusOr<AdversaryAnswer>(const AdversaryQuery&)>;

struct TrialRecord {
  Challenge challenge;
  AdversaryAnswer answer;
  bool correct = false;
};

struct Transcript {
  GameSpec spec;
  std::vector<TrialRecord> trials;
};

// Plays spec.trials rounds. Trials are independent and ordered by index in
// the transcript regardless of spec.workers. A failed training run aborts
// the game with an error naming the trial.
absl::StatusOr<Transcript> Play(const PopulationPool& pool,
                                const GameSpec& spec,
                                const TrainingAlgorithm& train,
                                const Adversary& adversary);

// Positive means "member" (b = 1).
struct GameScore {
  size_t trials = 0;
  size_t members = 0;
  size_t nonmembers = 0;
  size_t correct = 0;
  size_t true_positives = 0;
  size_t false_positives = 0;
  double accuracy = 0.0;
  // Undefined (nullopt) when the corresponding class never occurred.
  std::optional<double> tpr;
  std::optional<double> fpr;
};

absl::StatusOr<GameScore> Score(const Transcript& transcript);

// CSV with columns trial_index,b,b_hat,loss,threshold.
std::string TranscriptCsv(const Transcript& transcript);

}  // namespace miaudit

#endif  // MIAUDIT_GAME_H_
