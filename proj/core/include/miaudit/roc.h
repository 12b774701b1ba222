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

#ifndef MIAUDIT_ROC_H_
#define MIAUDIT_ROC_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "miaudit/attack.h"
#include "miaudit/threshold_fn.h"

namespace miaudit {

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;

  bool operator==(const RocPoint&) const = default;
};

enum class RocSource { kAlphaSweep, kScoreSweep };

struct RocCurve {
  // fpr non-decreasing; starts at (0,0) and ends at (1,1).
  std::vector<RocPoint> points;
  double auc = 0.0;
  RocSource source = RocSource::kScoreSweep;
  // kAlphaSweep: the grid used.
  std::vector<double> alpha_grid;
};

// Trapezoidal area under `points` (taken in order).
double TrapezoidAuc(std::span<const RocPoint> points);

// {0} ∪ 25 geometric points from 1e-4 to 1 ∪ {0.05, 0.10, ..., 1}, sorted.
std::vector<double> DefaultAlphaGrid();

// One (FPR, TPR) point per alpha. alpha = 0 and alpha = 1 denote the
// predict-nobody and predict-everybody tests. truths[i] = 1 marks a member.
absl::StatusOr<RocCurve> RocAlphaSweep(const ThresholdFn& fn,
                                       std::span<const ScoredTarget> targets,
                                       std::span<const int> truths,
                                       std::span<const double> alpha_grid);

// ROC obtained by thresholding `scores` (higher = more likely member) at
// every distinct value. Ties count one half, so the AUC equals the
// Mann-Whitney statistic.
absl::StatusOr<RocCurve> RocScoreSweep(std::span<const double> scores,
                                       std::span<const int> truths);

// Linear interpolation along the curve. On a vertical segment TprAtFpr
// returns the highest TPR; on a horizontal one FprAtTpr returns the lowest
// FPR.
double TprAtFpr(const RocCurve& curve, double fpr);
double FprAtTpr(const RocCurve& curve, double tpr);

// CSV with columns fpr,tpr,auc (the AUC repeated on every row).
std::string RocCsv(const RocCurve& curve);

}  // namespace miaudit

#endif  // MIAUDIT_ROC_H_
