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

#include "miaudit/population.h"

#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "miaudit/random.h"

namespace miaudit {

absl::StatusOr<PopulationPool> GenPopulation(int dim, int num_classes,
                                             size_t pool_size,
                                             double class_scale,
                                             const SeedSpec& seed) {
  if (dim < 1) return absl::InvalidArgumentError("dimension must be >= 1");
  if (num_classes < 2) {
    return absl::InvalidArgumentError("need at least 2 classes");
  }
  if (pool_size < static_cast<size_t>(num_classes)) {
    return absl::InvalidArgumentError(
        absl::StrCat("pool_size ", pool_size, " smaller than class count ",
                     num_classes));
  }
  if (!(class_scale >= 0.0) || !std::isfinite(class_scale)) {
    return absl::InvalidArgumentError("class_scale must be finite and >= 0");
  }

  PopulationPool pool;
  pool.dim = dim;
  pool.num_classes = num_classes;
  pool.class_scale = class_scale;
  pool.generator_seed = seed;
  pool.id = absl::StrFormat("pool-%016x", DeriveSeed(seed));

  const size_t d = static_cast<size_t>(dim);
  const size_t k = static_cast<size_t>(num_classes);
  pool.class_means.assign(k, std::vector<double>(d, 0.0));
  if (k <= d) {
    const double norm = std::sqrt(static_cast<double>(k) / (k - 1.0));
    for (size_t c = 0; c < k; ++c) {
      for (size_t j = 0; j < k; ++j) {
        pool.class_means[c][j] = norm * ((c == j ? 1.0 : 0.0) - 1.0 / k);
      }
    }
  } else if (k == d + 1) {
    // The same simplex in Helmert coordinates of the sum-zero hyperplane:
    // u_j = (1, ..., 1, -j, 0, ...) / sqrt(j (j + 1)), with j ones.
    const double norm = std::sqrt(static_cast<double>(k) / (k - 1.0));
    for (size_t c = 0; c < k; ++c) {
      for (size_t j = 1; j < k; ++j) {
        double dot = c < j ? 1.0 : (c == j ? -static_cast<double>(j) : 0.0);
        pool.class_means[c][j - 1] =
            norm * dot / std::sqrt(static_cast<double>(j * (j + 1)));
      }
    }
  } else {
    Rng rng(seed.Child("means"));
    for (auto& mean : pool.class_means) {
      double sq = 0.0;
      for (double& v : mean) {
        v = rng.Normal();
        sq += v * v;
      }
      for (double& v : mean) v /= std::sqrt(sq);
    }
  }

  Rng rng(seed.Child("features"));
  pool.records.resize(pool_size);
  for (size_t i = 0; i < pool_size; ++i) {
    Record& r = pool.records[i];
    r.id = static_cast<RecordId>(i);
    r.label = static_cast<int>(i % k);
    r.features.resize(d);
    for (size_t j = 0; j < d; ++j) {
      r.features[j] = pool.class_means[r.label][j] + class_scale * rng.Normal();
    }
  }
  return pool;
}

absl::StatusOr<std::vector<RecordId>> SampleIds(const PopulationPool& pool,
                                                size_t count,
                                                const SeedSpec& seed,
                                                const IdSet& exclude) {
  size_t excluded_in_pool = 0;
  for (RecordId id : exclude) {
    if (id >= 0 && static_cast<size_t>(id) < pool.size()) ++excluded_in_pool;
  }
  const size_t available = pool.size() - excluded_in_pool;
  if (count > available) {
    return absl::InvalidArgumentError(
        absl::StrCat("cannot draw ", count, " records: only ", available,
                     " available after exclusion"));
  }
  Rng rng(seed);
  std::vector<RecordId> out;
  out.reserve(count);
  if (4 * count <= available) {
    IdSet taken;
    while (out.size() < count) {
      const auto id = static_cast<RecordId>(rng.UniformBelow(pool.size()));
      if (exclude.contains(id) || !taken.insert(id).second) continue;
      out.push_back(id);
    }
    return out;
  }
  std::vector<RecordId> candidates;
  candidates.reserve(available);
  for (size_t i = 0; i < pool.size(); ++i) {
    const auto id = static_cast<RecordId>(i);
    if (!exclude.contains(id)) candidates.push_back(id);
  }
  for (size_t i = 0; i < count; ++i) {
    const size_t j = i + rng.UniformBelow(candidates.size() - i);
    std::swap(candidates[i], candidates[j]);
    out.push_back(candidates[i]);
  }
  return out;
}

absl::StatusOr<Dataset> SampleDataset(const PopulationPool& pool, size_t n,
                                      const SamplingMode& mode,
                                      const SeedSpec& seed,
                                      const IdSet& exclude) {
  Dataset dataset;
  dataset.pool_ref = pool.id;
  if (const auto* poisson = std::get_if<PoissonSampling>(&mode)) {
    if (!(poisson->rate > 0.0 && poisson->rate <= 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("Poisson rate ", poisson->rate, " outside (0, 1]"));
    }
    Rng rng(seed);
    for (size_t i = 0; i < pool.size(); ++i) {
      const auto id = static_cast<RecordId>(i);
      // Draw for every id so inclusion of one id does not depend on the
      // exclusion set.
      const bool keep = rng.Bernoulli(poisson->rate);
      if (keep && !exclude.contains(id)) dataset.record_ids.push_back(id);
    }
    return dataset;
  }
  absl::StatusOr<std::vector<RecordId>> ids = SampleIds(pool, n, seed, exclude);
  if (!ids.ok()) return ids.status();
  dataset.record_ids = *std::move(ids);
  return dataset;
}

absl::StatusOr<std::vector<RecordId>> SampleIdsPerClass(
    const PopulationPool& pool, size_t per_class, const SeedSpec& seed,
    const IdSet& exclude) {
  std::vector<RecordId> out;
  out.reserve(per_class * static_cast<size_t>(pool.num_classes));
  for (int label = 0; label < pool.num_classes; ++label) {
    std::vector<RecordId> candidates;
    for (const Record& r : pool.records) {
      if (r.label == label && !exclude.contains(r.id)) {
        candidates.push_back(r.id);
      }
    }
    if (candidates.size() < per_class) {
      return absl::InvalidArgumentError(
          absl::StrCat("insufficient pool: label ", label, " has ",
                       candidates.size(), " eligible records, need ",
                       per_class));
    }
    Rng rng(seed.Child("label", static_cast<uint64_t>(label)));
    for (size_t i = 0; i < per_class; ++i) {
      const size_t j = i + rng.UniformBelow(candidates.size() - i);
      std::swap(candidates[i], candidates[j]);
      out.push_back(candidates[i]);
    }
  }
  return out;
}

}  // namespace miaudit
