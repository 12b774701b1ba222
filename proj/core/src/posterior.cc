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

#include "miaudit/posterior.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "miaudit/random.h"

namespace miaudit {

absl::Status ValidatePosteriorConfig(const PosteriorConfig& config) {
  if (!(config.temperature > 0.0) || !std::isfinite(config.temperature)) {
    return absl::InvalidArgumentError("temperature must be > 0");
  }
  if (!(config.step_size > 0.0)) {
    return absl::InvalidArgumentError("step_size must be > 0");
  }
  if (config.burn_in < 0) return absl::InvalidArgumentError("burn_in must be >= 0");
  if (config.thinning < 1) {
    return absl::InvalidArgumentError("thinning must be >= 1");
  }
  if (!(config.box_radius > 0.0)) {
    return absl::InvalidArgumentError("box_radius must be > 0");
  }
  return absl::OkStatus();
}

int FreeParameterCount(int dim, int classes) {
  return (classes - 1) * (dim + 1);
}

ToyModel LogisticFromFree(int dim, int classes, std::span<const double> free) {
  ToyModel model(dim, 0, classes);
  std::span<double> w = model.w2();
  std::span<double> b = model.b2();
  size_t i = 0;
  for (int k = 1; k < classes; ++k) {
    for (int j = 0; j < dim; ++j) w[static_cast<size_t>(k * dim + j)] = free[i++];
    b[static_cast<size_t>(k)] = free[i++];
  }
  return model;
}

std::vector<double> FreeFromLogistic(const ToyModel& model) {
  std::vector<double> free;
  std::span<const double> params = model.params();
  const int d = model.dim();
  for (int k = 1; k < model.classes(); ++k) {
    for (int j = 0; j < d; ++j) {
      free.push_back(params[model.w2_offset() + static_cast<size_t>(k * d + j)]);
    }
    free.push_back(params[model.b2_offset() + static_cast<size_t>(k)]);
  }
  return free;
}

double GibbsEnergy(const PopulationPool& pool, const Dataset& dataset,
                   const ToyModel& model, double temperature) {
  double sum = 0.0;
  for (RecordId id : dataset.record_ids) sum += model.Loss(pool.record(id));
  return sum / temperature;
}

absl::StatusOr<std::vector<ToyModel>> PosteriorChain(
    const PopulationPool& pool, const Dataset& dataset,
    const PosteriorConfig& config, size_t count) {
  if (absl::Status s = ValidatePosteriorConfig(config); !s.ok()) return s;
  if (pool.dim > kMaxPosteriorDim) {
    return absl::InvalidArgumentError(absl::StrCat(
        "posterior sampler supports d <= ", kMaxPosteriorDim, ", got ",
        pool.dim));
  }
  const int d = pool.dim;
  const int k = pool.num_classes;
  const size_t p = static_cast<size_t>(FreeParameterCount(d, k));
  const double radius = config.box_radius;

  Rng init(config.seed.Child("init"));
  std::vector<double> theta(p);
  for (double& v : theta) v = radius * (2.0 * init.Uniform() - 1.0);
  ToyModel current = LogisticFromFree(d, k, theta);
  double energy = GibbsEnergy(pool, dataset, current, config.temperature);
  if (!std::isfinite(energy)) {
    return absl::InternalError("non-finite energy at initial state");
  }

  Rng rng(config.seed.Child("chain"));
  std::vector<double> proposal(p);
  std::vector<ToyModel> out;
  out.reserve(count);
  const uint64_t dataset_fp = DatasetFingerprint(dataset);
  const uint64_t total = static_cast<uint64_t>(config.burn_in) +
                         count * static_cast<uint64_t>(config.thinning);
  for (uint64_t step = 1; step <= total; ++step) {
    bool inside = true;
    for (size_t i = 0; i < p; ++i) {
      proposal[i] = theta[i] + config.step_size * rng.Normal();
      inside = inside && std::abs(proposal[i]) <= radius;
    }
    // Always consume the acceptance draw so the stream is position-aligned.
    const double u = rng.UniformOpen();
    if (inside) {
      ToyModel candidate = LogisticFromFree(d, k, proposal);
      const double e =
          GibbsEnergy(pool, dataset, candidate, config.temperature);
      if (!std::isfinite(e)) {
        return absl::InternalError(
            absl::StrCat("non-finite energy at step ", step));
      }
      if (std::log(u) < energy - e) {
        theta.swap(proposal);
        energy = e;
      }
    }
    if (step > static_cast<uint64_t>(config.burn_in) &&
        (step - config.burn_in) % config.thinning == 0) {
      ToyModel sample = LogisticFromFree(d, k, theta);
      sample.set_dataset_fingerprint(dataset_fp);
      sample.set_train_fingerprint(
          Mix64(dataset_fp ^ DeriveSeed(config.seed) ^ step));
      out.push_back(std::move(sample));
    }
  }
  return out;
}

absl::StatusOr<ToyModel> PosteriorSample(const PopulationPool& pool,
                                         const Dataset& dataset,
                                         const PosteriorConfig& config) {
  absl::StatusOr<std::vector<ToyModel>> chain =
      PosteriorChain(pool, dataset, config, 1);
  if (!chain.ok()) return chain.status();
  return std::move(chain->front());
}

}  // namespace miaudit
