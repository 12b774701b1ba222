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

#ifndef MIAUDIT_ANALYSIS_H_
#define MIAUDIT_ANALYSIS_H_

#include <map>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "miaudit/empirical_dist.h"
#include "miaudit/model.h"
#include "miaudit/out_world.h"
#include "miaudit/population.h"
#include "miaudit/roc.h"
#include "miaudit/seed.h"
#include "miaudit/smoothing.h"
#include "miaudit/threshold_fn.h"
#include "miaudit/trainer.h"
#include "miaudit/types.h"

namespace miaudit {

// Fraction of positions where the bits match.
absl::StatusOr<double> Agreement(std::span<const int> a, std::span<const int> b);

struct AgreementTable {
  // Row / column names, e.g. {"S", "P", "R", "D", "L", "GT"}.
  std::vector<std::string> names;
  // rates[i][j] = Agreement(preds i, preds j).
  std::vector<std::vector<double>> rates;
  std::string split;
};

absl::StatusOr<AgreementTable> ComputeAgreementTable(
    const std::vector<std::string>& names,
    const std::vector<std::vector<int>>& predictions, std::string split);

std::string AgreementCsv(const AgreementTable& table);

// predictions[attack][m][j]: bit of `attack` for record_ids[j] on model m.
struct PartitionInput {
  std::vector<RecordId> record_ids;
  std::map<AttackKind, std::vector<std::vector<int>>> predictions;
};

struct PartitionOptions {
  // In (0.5, 1].
  double majority = 0.8;
  // Require Attack D too for AllCorrect.
  bool include_d = false;
  size_t baseline_size = 10;
  SeedSpec seed;
};

struct VulnPartition {
  std::vector<RecordId> all_correct;
  std::vector<RecordId> r_correct;
  std::vector<RecordId> sp_correct;
  std::vector<RecordId> random_baseline;
  double majority = 0.8;
};

// AllCorrect: member by S, P and R on >= majority of the models.
// RCorrect: member by R on >= majority, by S and by P on <= 1 - majority.
// SPCorrect: member by S and P on >= majority, by R on <= 1 - majority.
// RandomBaseline: a uniform sample of the records.
absl::StatusOr<VulnPartition> PartitionRecords(const PartitionInput& input,
                                               const PartitionOptions& options);

struct LooVulnOptions {
  int num_models = 20;
  std::vector<double> alpha_grid = DefaultAlphaGrid();
  SmoothingMethod method = SmoothingMethod::kLinearInterp;
  TrainConfig train;
  SeedSpec seed;
  int workers = 1;
};

struct LooVulnResult {
  // Models trained with the record (members) and without it.
  OutWorldSet with_models;
  OutWorldSet without_models;
  // Attack L calibrated on the without-models, swept over the alpha grid.
  RocCurve alpha_sweep;
  // The same test family scored by -loss: its threshold does not vary
  // across the models, so this is the limit of a continuous alpha grid.
  RocCurve score_sweep;
};

absl::StatusOr<LooVulnResult> LooVulnerability(const PopulationPool& pool,
                                               const Dataset& fixed_dataset,
                                               RecordId record,
                                               const LooVulnOptions& options);

// Pooled losses of the columns `records` across every row of `matrix`.
absl::StatusOr<EmpiricalDist> LossHistogram(const SignalMatrix& matrix,
                                            std::span<const RecordId> records);

// CSV with columns set,bin_lo,bin_hi,count over `bins` equal-width bins
// spanning all sets.
std::string HistogramCsv(const std::vector<std::string>& names,
                         const std::vector<EmpiricalDist>& dists, int bins);

struct Neighbor {
  RecordId id = -1;
  double distance = 0.0;
};

// Cosine distance between penultimate embeddings; +inf when either
// embedding has zero norm.
double CosineDistance(std::span<const double> u, std::span<const double> v);

// The k candidates closest to `query` in the model's penultimate space,
// ordered by (distance, id).
absl::StatusOr<std::vector<Neighbor>> LatentNeighbors(
    const Record& query, std::span<const Record> candidates,
    const ToyModel& model, size_t k);

// CSV with columns record_id,confidence_a,confidence_b.
std::string ScatterCsv(std::span<const RecordId> records,
                       std::span<const double> a, std::span<const double> b);

}  // namespace miaudit

#endif  // MIAUDIT_ANALYSIS_H_
