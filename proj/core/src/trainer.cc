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

#include "miaudit/trainer.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "miaudit/random.h"

namespace miaudit {
namespace {

uint64_t Combine(uint64_t h, uint64_t v) {
  return Mix64(h ^ (v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2)));
}

uint64_t ConfigFingerprint(const TrainConfig& c) {
  uint64_t h = Fnv1a64("train-config");
  h = Combine(h, static_cast<uint64_t>(c.hidden_width));
  h = Combine(h, static_cast<uint64_t>(c.epochs));
  h = Combine(h, static_cast<uint64_t>(c.batch_size));
  h = Combine(h, std::bit_cast<uint64_t>(c.learning_rate));
  h = Combine(h, c.clip_norm ? std::bit_cast<uint64_t>(*c.clip_norm) : 0);
  h = Combine(h, std::bit_cast<uint64_t>(c.weight_init_scale));
  return Combine(h, DeriveSeed(c.seed));
}

// Per-call scratch buffers for the forward/backward pass.
struct Scratch {
  std::vector<double> hidden;
  std::vector<double> logits;
  std::vector<double> dhidden;
};

double AccumulateExample(const ToyModel& model, const Example& ex,
                         double weight, Scratch& s, std::span<double> grad) {
  const int d = model.dim();
  const int h = model.hidden();
  const int k = model.classes();
  const int width = model.penultimate_width();
  std::span<const double> params = model.params();

  model.Features(ex.x, s.hidden);
  const double* w2 = params.data() + model.w2_offset();
  const double* b2 = params.data() + model.b2_offset();
  double max = -INFINITY;
  for (int c = 0; c < k; ++c) {
    double acc = b2[c];
    const double* row = w2 + static_cast<size_t>(c) * width;
    for (int j = 0; j < width; ++j) acc += row[j] * s.hidden[j];
    s.logits[c] = acc;
    max = std::max(max, acc);
  }
  double sum = 0.0;
  for (int c = 0; c < k; ++c) sum += std::exp(s.logits[c] - max);
  const double log_z = max + std::log(sum);
  double loss = 0.0;
  for (int c = 0; c < k; ++c) {
    const double log_p = s.logits[c] - log_z;
    if (ex.target[c] != 0.0) loss -= ex.target[c] * log_p;
    // dL/dlogit = p - q, scaled by the batch weight.
    s.logits[c] = weight * (std::exp(log_p) - ex.target[c]);
  }

  double* gw2 = grad.data() + model.w2_offset();
  double* gb2 = grad.data() + model.b2_offset();
  for (int c = 0; c < k; ++c) {
    const double dz = s.logits[c];
    gb2[c] += dz;
    double* row = gw2 + static_cast<size_t>(c) * width;
    for (int j = 0; j < width; ++j) row[j] += dz * s.hidden[j];
  }
  if (h == 0) return loss;

  std::fill(s.dhidden.begin(), s.dhidden.end(), 0.0);
  for (int c = 0; c < k; ++c) {
    const double dz = s.logits[c];
    const double* row = w2 + static_cast<size_t>(c) * width;
    for (int j = 0; j < h; ++j) s.dhidden[j] += dz * row[j];
  }
  double* gw1 = grad.data() + model.w1_offset();
  double* gb1 = grad.data() + model.b1_offset();
  for (int i = 0; i < h; ++i) {
    const double da = s.dhidden[i] * (1.0 - s.hidden[i] * s.hidden[i]);
    gb1[i] += da;
    double* row = gw1 + static_cast<size_t>(i) * d;
    for (int j = 0; j < d; ++j) row[j] += da * ex.x[j];
  }
  return loss;
}

Scratch MakeScratch(const ToyModel& model) {
  Scratch s;
  s.hidden.resize(static_cast<size_t>(model.penultimate_width()));
  s.logits.resize(static_cast<size_t>(model.classes()));
  s.dhidden.resize(static_cast<size_t>(std::max(model.hidden(), 1)));
  return s;
}

}  // namespace

absl::Status ValidateTrainConfig(const TrainConfig& config) {
  if (config.hidden_width < 0) {
    return absl::InvalidArgumentError("hidden_width must be >= 0");
  }
  if (config.epochs < 1) return absl::InvalidArgumentError("epochs must be >= 1");
  if (config.batch_size < 1) {
    return absl::InvalidArgumentError("batch_size must be >= 1");
  }
  if (!(config.learning_rate >= 0.0) || !std::isfinite(config.learning_rate)) {
    return absl::InvalidArgumentError("learning_rate must be finite and >= 0");
  }
  if (config.clip_norm && !(*config.clip_norm > 0.0)) {
    return absl::InvalidArgumentError("clip_norm must be > 0");
  }
  if (!(config.weight_init_scale >= 0.0)) {
    return absl::InvalidArgumentError("weight_init_scale must be >= 0");
  }
  return absl::OkStatus();
}

ToyModel InitModel(int dim, int classes, const TrainConfig& config) {
  ToyModel model(dim, config.hidden_width, classes);
  Rng rng(config.seed.Child("init"));
  if (model.hidden() > 0) {
    const double s1 = config.weight_init_scale / std::sqrt(double(dim));
    for (double& w : model.w1()) w = s1 * rng.Normal();
  }
  const double s2 =
      config.weight_init_scale / std::sqrt(double(model.penultimate_width()));
  for (double& w : model.w2()) w = s2 * rng.Normal();
  return model;
}

double BatchLossAndGradient(const ToyModel& model,
                            std::span<const Example> batch,
                            std::span<double> grad) {
  std::fill(grad.begin(), grad.end(), 0.0);
  if (batch.empty()) return 0.0;
  Scratch s = MakeScratch(model);
  const double weight = 1.0 / static_cast<double>(batch.size());
  double loss = 0.0;
  for (const Example& ex : batch) {
    loss += AccumulateExample(model, ex, weight, s, grad);
  }
  return loss * weight;
}

absl::StatusOr<ToyModel> TrainOnTargets(
    const PopulationPool& pool, std::span<const RecordId> ids,
    std::span<const std::vector<double>> targets, const TrainConfig& config,
    const TrainObserver* observer) {
  if (absl::Status s = ValidateTrainConfig(config); !s.ok()) return s;
  if (ids.empty()) return absl::InvalidArgumentError("empty training set");
  if (ids.size() != targets.size()) {
    return absl::InvalidArgumentError("ids and targets differ in length");
  }
  for (size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0 || static_cast<size_t>(ids[i]) >= pool.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("record id ", ids[i], " not in pool"));
    }
    if (targets[i].size() != static_cast<size_t>(pool.num_classes)) {
      return absl::InvalidArgumentError("target vector has wrong length");
    }
  }

  ToyModel model = InitModel(pool.dim, pool.num_classes, config);
  std::vector<double> grad(model.params().size());
  Scratch scratch = MakeScratch(model);
  std::vector<size_t> order(ids.size());
  const size_t batch = static_cast<size_t>(config.batch_size);
  int step = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), size_t{0});
    Rng rng(config.seed.Child("epoch", static_cast<uint64_t>(epoch)));
    rng.Shuffle(std::span<size_t>(order));
    for (size_t start = 0; start < order.size(); start += batch) {
      const size_t end = std::min(order.size(), start + batch);
      const double weight = 1.0 / static_cast<double>(end - start);
      std::fill(grad.begin(), grad.end(), 0.0);
      for (size_t i = start; i < end; ++i) {
        const size_t idx = order[i];
        Example ex{pool.record(ids[idx]).features, targets[idx]};
        AccumulateExample(model, ex, weight, scratch, grad);
      }
      double sq = 0.0;
      for (double g : grad) sq += g * g;
      const double norm = std::sqrt(sq);
      double scale = 1.0;
      if (config.clip_norm && norm > *config.clip_norm) {
        scale = *config.clip_norm / norm;
      }
      const double lr = config.learning_rate * scale;
      std::span<double> params = model.params();
      for (size_t p = 0; p < params.size(); ++p) params[p] -= lr * grad[p];
      if (observer != nullptr && *observer) {
        (*observer)(TrainStep{epoch, step, norm, norm * scale});
      }
      ++step;
    }
    if (!model.AllFinite()) {
      return absl::InternalError(
          absl::StrCat("training diverged at epoch ", epoch));
    }
  }

  model.set_dataset_fingerprint(DatasetFingerprint(ids));
  uint64_t fp = Combine(ConfigFingerprint(config), model.dataset_fingerprint());
  model.set_train_fingerprint(fp);
  return model;
}

absl::StatusOr<ToyModel> Train(const PopulationPool& pool,
                               const Dataset& dataset,
                               const TrainConfig& config,
                               const TrainObserver* observer) {
  if (dataset.record_ids.empty()) {
    return absl::InvalidArgumentError("empty training set");
  }
  std::vector<std::vector<double>> targets;
  targets.reserve(dataset.size());
  for (RecordId id : dataset.record_ids) {
    if (id < 0 || static_cast<size_t>(id) >= pool.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("record id ", id, " not in pool"));
    }
    std::vector<double> onehot(static_cast<size_t>(pool.num_classes), 0.0);
    onehot[static_cast<size_t>(pool.record(id).label)] = 1.0;
    targets.push_back(std::move(onehot));
  }
  return TrainOnTargets(pool, dataset.record_ids, targets, config, observer);
}

absl::StatusOr<std::vector<SoftLabel>> SoftLabelRecords(
    const ToyModel& model, const PopulationPool& pool,
    std::span<const RecordId> ids) {
  if (model.dim() != pool.dim || model.classes() != pool.num_classes) {
    return absl::InvalidArgumentError(
        absl::StrCat("model shape (d=", model.dim(), ", K=", model.classes(),
                     ") does not match pool (d=", pool.dim,
                     ", K=", pool.num_classes, ")"));
  }
  std::vector<SoftLabel> out;
  out.reserve(ids.size());
  for (RecordId id : ids) {
    out.push_back(SoftLabel{id, model.PredictProba(pool.record(id))});
  }
  return out;
}

absl::StatusOr<ToyModel> Distill(const ToyModel& teacher,
                                 const PopulationPool& pool, size_t n,
                                 const TrainConfig& config,
                                 const SeedSpec& seed,
                                 const IdSet& exclude) {
  return Distill(teacher, pool, n, config, seed, exclude, nullptr);
}

absl::StatusOr<ToyModel> Distill(const ToyModel& teacher,
                                 const PopulationPool& pool, size_t n,
                                 const TrainConfig& config,
                                 const SeedSpec& seed, const IdSet& exclude,
                                 Dataset* distillation_set) {
  if (n == 0) return absl::InvalidArgumentError("empty distillation set");
  absl::StatusOr<Dataset> dataset = SampleDataset(
      pool, n, WithoutReplacement{}, seed.Child("dataset"), exclude);
  if (!dataset.ok()) return dataset.status();
  absl::StatusOr<std::vector<SoftLabel>> labels =
      SoftLabelRecords(teacher, pool, dataset->record_ids);
  if (!labels.ok()) return labels.status();
  std::vector<std::vector<double>> targets;
  targets.reserve(labels->size());
  for (SoftLabel& l : *labels) targets.push_back(std::move(l.probs));
  TrainConfig student = config;
  student.seed = seed.Child("train");
  absl::StatusOr<ToyModel> model =
      TrainOnTargets(pool, dataset->record_ids, targets, student);
  if (!model.ok()) return model.status();
  model->set_train_fingerprint(
      Combine(model->train_fingerprint(), teacher.train_fingerprint()));
  if (distillation_set != nullptr) *distillation_set = *std::move(dataset);
  return model;
}

}  // namespace miaudit
