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

#include "miaudit/out_world.h"

#include <algorithm>

#include "absl/strings/str_cat.h"
#include "miaudit/parallel.h"

namespace miaudit {
namespace {

IdSet Union(const IdSet& a, std::span<const RecordId> b) {
  IdSet out = a;
  out.insert(b.begin(), b.end());
  return out;
}

absl::Status Annotate(const absl::Status& s, absl::string_view what) {
  if (s.ok()) return s;
  return absl::Status(s.code(), absl::StrCat(what, ": ", s.message()));
}

// Fills rows [0, num_models) of `set` by training one model per row.
using RowBuilder =
    std::function<absl::StatusOr<ToyModel>(size_t row, ModelMeta& meta)>;

absl::Status FillRows(OutWorldSet& set, const PopulationPool& pool,
                      std::span<const RecordId> columns, int num_models,
                      int workers, const RowBuilder& build) {
  SignalMatrix& m = set.matrix;
  m.record_ids.assign(columns.begin(), columns.end());
  m.model_ids.assign(static_cast<size_t>(num_models), "");
  m.values.assign(m.rows() * m.cols(), 0.0);
  set.models.assign(static_cast<size_t>(num_models), ModelMeta{});
  return ParallelFor(
      static_cast<size_t>(num_models), workers, [&](size_t i) -> absl::Status {
        ModelMeta& meta = set.models[i];
        absl::StatusOr<ToyModel> model = build(i, meta);
        if (!model.ok()) {
          return Annotate(model.status(), absl::StrCat("model ", i));
        }
        meta.dataset_fingerprint = DatasetFingerprint(meta.dataset_ids);
        m.model_ids[i] = meta.model_id;
        for (size_t c = 0; c < columns.size(); ++c) {
          m.at(i, c) = model->Loss(pool.record(columns[c]));
        }
        return absl::OkStatus();
      });
}

}  // namespace

void AppendLossRow(const ToyModel& model, const PopulationPool& pool,
                   std::span<const RecordId> records, SignalMatrix& matrix) {
  matrix.model_ids.push_back(model.id());
  for (RecordId id : records) {
    matrix.values.push_back(model.Loss(pool.record(id)));
  }
}

absl::StatusOr<OutWorldSet> BuildShadow(const PopulationPool& pool,
                                        const ShadowOptions& options,
                                        const IdSet& exclude) {
  if (options.num_models < 1) {
    return absl::InvalidArgumentError("n_models must be >= 1");
  }
  if (options.eval_per_class == 0) {
    return absl::InvalidArgumentError(
        "label 0 has zero evaluation records");
  }
  absl::StatusOr<std::vector<RecordId>> eval = SampleIdsPerClass(
      pool, options.eval_per_class, options.seed.Child("eval"), exclude);
  if (!eval.ok()) return eval.status();
  const IdSet forbidden = Union(exclude, *eval);

  OutWorldSet set;
  set.kind = OutWorldKind::kShadow;
  for (size_t c = 0; c < eval->size(); ++c) {
    set.grouping[pool.record((*eval)[c]).label].push_back(c);
  }
  for (int label = 0; label < pool.num_classes; ++label) {
    if (!set.grouping.contains(label)) {
      return absl::InvalidArgumentError(
          absl::StrCat("label ", label, " has zero evaluation records"));
    }
  }
  absl::Status status = FillRows(
      set, pool, *eval, options.num_models, options.workers,
      [&](size_t i, ModelMeta& meta) -> absl::StatusOr<ToyModel> {
        const SeedSpec seed = options.seed.Child("shadow", i);
        absl::StatusOr<Dataset> d =
            SampleDataset(pool, options.dataset_size, WithoutReplacement{},
                          seed.Child("dataset"), forbidden);
        if (!d.ok()) return d.status();
        TrainConfig config = options.train;
        config.seed = seed.Child("train");
        meta.model_id = absl::StrCat("shadow-", i);
        meta.seed = DeriveSeed(config.seed);
        meta.dataset_ids = d->record_ids;
        return Train(pool, *d, config);
      });
  if (!status.ok()) return status;
  return set;
}

absl::StatusOr<OutWorldSet> BuildPopulation(const ToyModel& target,
                                            const PopulationPool& pool,
                                            size_t m_per_class,
                                            const SeedSpec& seed,
                                            const IdSet& exclude) {
  if (m_per_class == 0) {
    return absl::InvalidArgumentError("m_per_class must be >= 1");
  }
  absl::StatusOr<std::vector<RecordId>> ids =
      SampleIdsPerClass(pool, m_per_class, seed, exclude);
  if (!ids.ok()) return ids.status();
  OutWorldSet set;
  set.kind = OutWorldKind::kPopulation;
  set.target_model_id = target.id();
  set.matrix.record_ids = *ids;
  AppendLossRow(target, pool, *ids, set.matrix);
  set.models.push_back(ModelMeta{target.id(), 0, target.dataset_fingerprint(), {}});
  for (size_t c = 0; c < ids->size(); ++c) {
    set.grouping[pool.record((*ids)[c]).label].push_back(c);
  }
  return set;
}

absl::StatusOr<OutWorldSet> BuildReference(
    const PopulationPool& pool, std::span<const RecordId> target_records,
    const ReferenceOptions& options, const IdSet& exclude) {
  if (options.num_models < 1) {
    return absl::InvalidArgumentError("n_models must be >= 1");
  }
  const IdSet forbidden = Union(exclude, target_records);
  OutWorldSet set;
  set.kind = OutWorldKind::kReference;
  absl::Status status = FillRows(
      set, pool, target_records, options.num_models, options.workers,
      [&](size_t i, ModelMeta& meta) -> absl::StatusOr<ToyModel> {
        const SeedSpec seed = options.seed.Child("reference", i);
        absl::StatusOr<Dataset> d =
            SampleDataset(pool, options.dataset_size, WithoutReplacement{},
                          seed.Child("dataset"), forbidden);
        if (!d.ok()) return d.status();
        TrainConfig config = options.train;
        config.seed = seed.Child("train");
        meta.model_id = absl::StrCat("reference-", i);
        meta.seed = DeriveSeed(config.seed);
        meta.dataset_ids = d->record_ids;
        return Train(pool, *d, config);
      });
  if (!status.ok()) return status;
  return set;
}

absl::StatusOr<OutWorldSet> BuildDistilled(
    const ToyModel& target, const PopulationPool& pool,
    std::span<const RecordId> target_records, const DistilledOptions& options,
    const IdSet& exclude) {
  if (options.num_models < 1) {
    return absl::InvalidArgumentError("n_models must be >= 1");
  }
  const IdSet forbidden = Union(exclude, target_records);
  OutWorldSet set;
  set.kind = OutWorldKind::kDistilled;
  set.target_model_id = target.id();
  absl::Status status = FillRows(
      set, pool, target_records, options.num_models, options.workers,
      [&](size_t i, ModelMeta& meta) -> absl::StatusOr<ToyModel> {
        const SeedSpec seed = options.seed.Child("distilled", i);
        Dataset distillation;
        absl::StatusOr<ToyModel> model =
            Distill(target, pool, options.dataset_size, options.train, seed,
                    forbidden, &distillation);
        meta.model_id = absl::StrCat("distilled-", i);
        meta.seed = DeriveSeed(seed.Child("train"));
        meta.dataset_ids = std::move(distillation.record_ids);
        return model;
      });
  if (!status.ok()) return status;
  return set;
}

absl::StatusOr<OutWorldSet> BuildLeaveOneOut(
    const PopulationPool& pool, const Dataset& fixed_dataset,
    RecordId target_record, const LeaveOneOutOptions& options) {
  if (options.num_models < 1) {
    return absl::InvalidArgumentError("n_models must be >= 1");
  }
  if (target_record < 0 || static_cast<size_t>(target_record) >= pool.size()) {
    return absl::InvalidArgumentError("target record not in pool");
  }
  Dataset without = fixed_dataset;
  std::erase(without.record_ids, target_record);
  OutWorldSet set;
  set.kind = OutWorldKind::kLeaveOneOut;
  set.target_in_dataset = without.size() != fixed_dataset.size();
  const RecordId columns[] = {target_record};
  absl::Status status = FillRows(
      set, pool, columns, options.num_models, options.workers,
      [&](size_t i, ModelMeta& meta) -> absl::StatusOr<ToyModel> {
        TrainConfig config = options.train;
        config.seed = options.seed.Child("loo", i);
        meta.model_id = absl::StrCat("loo-", i);
        meta.seed = DeriveSeed(config.seed);
        meta.dataset_ids = without.record_ids;
        return Train(pool, without, config);
      });
  if (!status.ok()) return status;
  return set;
}

absl::StatusOr<OutWorldSet> BuildWithRecord(const PopulationPool& pool,
                                            const Dataset& fixed_dataset,
                                            RecordId target_record,
                                            const LeaveOneOutOptions& options) {
  if (options.num_models < 1) {
    return absl::InvalidArgumentError("n_models must be >= 1");
  }
  if (!fixed_dataset.Contains(target_record)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "record ", target_record, " is not in the fixed dataset"));
  }
  OutWorldSet set;
  set.kind = OutWorldKind::kExternal;
  set.target_in_dataset = true;
  const RecordId columns[] = {target_record};
  absl::Status status = FillRows(
      set, pool, columns, options.num_models, options.workers,
      [&](size_t i, ModelMeta& meta) -> absl::StatusOr<ToyModel> {
        TrainConfig config = options.train;
        config.seed = options.seed.Child("with", i);
        meta.model_id = absl::StrCat("with-", i);
        meta.seed = DeriveSeed(config.seed);
        meta.dataset_ids = fixed_dataset.record_ids;
        return Train(pool, fixed_dataset, config);
      });
  if (!status.ok()) return status;
  return set;
}

absl::StatusOr<OutWorldSet> Ingest(const std::string& path,
                                   const PopulationPool* pool) {
  absl::StatusOr<SignalFile> file = ReadSignalFile(path);
  if (!file.ok()) return file.status();
  OutWorldSet set;
  set.kind = file->kind;
  set.matrix = std::move(file->matrix);
  for (const std::string& id : set.matrix.model_ids) {
    set.models.push_back(ModelMeta{id, 0, 0, {}});
  }
  if (set.kind == OutWorldKind::kPopulation && set.matrix.rows() == 1) {
    set.target_model_id = set.matrix.model_ids[0];
  }
  if (pool != nullptr) {
    for (size_t c = 0; c < set.matrix.cols(); ++c) {
      const RecordId id = set.matrix.record_ids[c];
      if (static_cast<size_t>(id) >= pool->size()) {
        return absl::InvalidArgumentError(
            absl::StrCat(path, ": record id ", id, " not in pool"));
      }
      set.grouping[pool->record(id).label].push_back(c);
    }
  }
  return set;
}

}  // namespace miaudit
