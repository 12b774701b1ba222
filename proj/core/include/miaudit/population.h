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

#ifndef MIAUDIT_POPULATION_H_
#define MIAUDIT_POPULATION_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "miaudit/seed.h"
#include "miaudit/types.h"

namespace miaudit {

// Synthetic population: a Gaussian mixture with one isotropic component per
// class. Record ids equal their index in `records`.
struct PopulationPool {
  int dim = 0;
  int num_classes = 0;
  std::vector<Record> records;
  std::vector<std::vector<double>> class_means;
  double class_scale = 0.0;
  SeedSpec generator_seed;
  std::string id;

  size_t size() const { return records.size(); }
  const Record& record(RecordId id) const {
    return records[static_cast<size_t>(id)];
  }
};

// Generates a pool of `pool_size` records. Record i has label i % K, so
// class counts differ by at most one. Class means are the vertices of a
// regular simplex with unit-norm vertices when K <= d:
//
//   mean_k = sqrt(K / (K - 1)) * (e_k - (1/K) * sum_{j<K} e_j)
//
// the same simplex in the K - 1 Helmert coordinates of the sum-zero
// hyperplane when K = d + 1, and seeded random unit vectors otherwise.
// Features are mean_label + class_scale * N(0, I).
absl::StatusOr<PopulationPool> GenPopulation(int dim, int num_classes,
                                             size_t pool_size,
                                             double class_scale,
                                             const SeedSpec& seed);

struct WithoutReplacement {};
struct PoissonSampling {
  double rate = 0.5;
};
using SamplingMode = std::variant<WithoutReplacement, PoissonSampling>;

using IdSet = std::unordered_set<RecordId>;

// Draws a dataset from `pool`. WithoutReplacement returns exactly n distinct
// ids in draw order; PoissonSampling keeps each id independently with
// probability rate (n is ignored). Ids in `exclude` never appear.
absl::StatusOr<Dataset> SampleDataset(const PopulationPool& pool, size_t n,
                                      const SamplingMode& mode,
                                      const SeedSpec& seed,
                                      const IdSet& exclude = {});

// Draws `count` distinct ids uniformly from the pool minus `exclude`.
absl::StatusOr<std::vector<RecordId>> SampleIds(const PopulationPool& pool,
                                                size_t count,
                                                const SeedSpec& seed,
                                                const IdSet& exclude = {});

// Draws `per_class` distinct ids of every label, excluding `exclude`.
// Output is grouped by label, ascending.
absl::StatusOr<std::vector<RecordId>> SampleIdsPerClass(
    const PopulationPool& pool, size_t per_class, const SeedSpec& seed,
    const IdSet& exclude = {});

}  // namespace miaudit

#endif  // MIAUDIT_POPULATION_H_
