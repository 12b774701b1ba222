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

#ifndef MIAUDIT_OUT_WORLD_H_
#define MIAUDIT_OUT_WORLD_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "miaudit/model.h"
#include "miaudit/population.h"
#include "miaudit/signal_csv.h"
#include "miaudit/trainer.h"
#include "miaudit/types.h"

namespace miaudit {

using OutWorldKind = SignalKind;

// Provenance of one row of an out-world matrix.
struct ModelMeta {
  std::string model_id;
  uint64_t seed = 0;
  uint64_t dataset_fingerprint = 0;
  std::vector<RecordId> dataset_ids;
};

// Samples of non-member losses from one out world. Reference, Distilled and
// LeaveOneOut sets have one column per target record; Population has one
// row (the target model).
struct OutWorldSet {
  OutWorldKind kind = OutWorldKind::kExternal;
  SignalMatrix matrix;
  std::vector<ModelMeta> models;
  // Shadow: label -> indices of the columns holding records of that label.
  std::map<int, std::vector<size_t>> grouping;
  // Population / Distilled / LeaveOneOut: the model being attacked.
  std::string target_model_id;
  // LeaveOneOut: whether the target record was in the fixed dataset.
  bool target_in_dataset = false;
};

struct ShadowOptions {
  size_t dataset_size = 0;
  int num_models = 1;
  // Evaluation records drawn per label.
  size_t eval_per_class = 10;
  TrainConfig train;
  SeedSpec seed;
  int workers = 1;
};

// Trains num_models shadow models and evaluates them on fresh population
// records. The evaluation records are drawn once (seed/"eval") and every
// shadow dataset is drawn from the pool minus those records, so every cell
// is a non-member loss. Ids in `exclude` are used for neither.
absl::StatusOr<OutWorldSet> BuildShadow(const PopulationPool& pool,
                                        const ShadowOptions& options,
                                        const IdSet& exclude = {});

// Losses of the target model on m_per_class fresh records per label drawn
// from the pool minus `exclude` (normally the target's training ids).
absl::StatusOr<OutWorldSet> BuildPopulation(const ToyModel& target,
                                            const PopulationPool& pool,
                                            size_t m_per_class,
                                            const SeedSpec& seed,
                                            const IdSet& exclude);

struct ReferenceOptions {
  size_t dataset_size = 0;
  int num_models = 1;
  TrainConfig train;
  SeedSpec seed;
  int workers = 1;
};

// Trains num_models models on fresh datasets that contain none of the
// target records (nor `exclude`), and records every model's loss on every
// target record.
absl::StatusOr<OutWorldSet> BuildReference(
    const PopulationPool& pool, std::span<const RecordId> target_records,
    const ReferenceOptions& options, const IdSet& exclude = {});

struct DistilledOptions {
  // Size of each distillation dataset.
  size_t dataset_size = 0;
  int num_models = 1;
  TrainConfig train;
  SeedSpec seed;
  int workers = 1;
};

// Distills `target` num_models times, each on a fresh soft-labeled dataset
// that contains none of the target records (nor `exclude`).
absl::StatusOr<OutWorldSet> BuildDistilled(
    const ToyModel& target, const PopulationPool& pool,
    std::span<const RecordId> target_records, const DistilledOptions& options,
    const IdSet& exclude = {});

struct LeaveOneOutOptions {
  int num_models = 1;
  TrainConfig train;
  SeedSpec seed;
  int workers = 1;
};

// Trains num_models models on exactly fixed_dataset minus target_record
// with fresh training seeds.
absl::StatusOr<OutWorldSet> BuildLeaveOneOut(const PopulationPool& pool,
                                             const Dataset& fixed_dataset,
                                             RecordId target_record,
                                             const LeaveOneOutOptions& options);

// Trains num_models models on exactly fixed_dataset, which must contain
// target_record, and records their losses on it. Seeds: seed/"with":i.
absl::StatusOr<OutWorldSet> BuildWithRecord(const PopulationPool& pool,
                                            const Dataset& fixed_dataset,
                                            RecordId target_record,
                                            const LeaveOneOutOptions& options);

// Reads a signal CSV. When `pool` is given, Shadow grouping is rebuilt from
// the pool's labels.
absl::StatusOr<OutWorldSet> Ingest(const std::string& path,
                                   const PopulationPool* pool = nullptr);

// Evaluates `model` on `records`, appending one row to `matrix`.
void AppendLossRow(const ToyModel& model, const PopulationPool& pool,
                   std::span<const RecordId> records, SignalMatrix& matrix);

}  // namespace miaudit

#endif  // MIAUDIT_OUT_WORLD_H_
