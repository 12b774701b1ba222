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

#include "miaudit/roc.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "miaudit/signal_csv.h"

namespace miaudit {
namespace {

struct ClassCounts {
  size_t positives = 0;
  size_t negatives = 0;
};

absl::StatusOr<ClassCounts> CountClasses(std::span<const int> truths) {
  ClassCounts c;
  for (int t : truths) {
    if (t == 1) {
      ++c.positives;
    } else if (t == 0) {
      ++c.negatives;
    } else {
      return absl::InvalidArgumentError("ground truth must be 0 or 1");
    }
  }
  if (c.positives == 0 || c.negatives == 0) {
    return absl::InvalidArgumentError(
        "challenge set must contain both members and non-members");
  }
  return c;
}

void PushDistinct(std::vector<RocPoint>& points, RocPoint p) {
  if (points.empty() || !(points.back() == p)) points.push_back(p);
}

}  // namespace

double TrapezoidAuc(std::span<const RocPoint> points) {
  double area = 0.0;
  for (size_t i = 1; i < points.size(); ++i) {
    area += (points[i].fpr - points[i - 1].fpr) *
            (points[i].tpr + points[i - 1].tpr) / 2.0;
  }
  return area;
}

std::vector<double> DefaultAlphaGrid() {
  std::vector<double> grid = {0.0};
  for (int i = 0; i < 25; ++i) grid.push_back(std::pow(10.0, -4.0 + i / 6.0));
  grid.back() = 1.0;
  for (int i = 1; i <= 20; ++i) grid.push_back(i * 0.05);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

absl::StatusOr<RocCurve> RocAlphaSweep(const ThresholdFn& fn,
                                       std::span<const ScoredTarget> targets,
                                       std::span<const int> truths,
                                       std::span<const double> alpha_grid) {
  if (targets.size() != truths.size()) {
    return absl::InvalidArgumentError("targets and truths differ in length");
  }
  absl::StatusOr<ClassCounts> counts = CountClasses(truths);
  if (!counts.ok()) return counts.status();
  if (!std::is_sorted(alpha_grid.begin(), alpha_grid.end())) {
    return absl::InvalidArgumentError("alpha grid must be sorted");
  }
  for (double a : alpha_grid) {
    if (!(a >= 0.0 && a <= 1.0)) {
      return absl::InvalidArgumentError("alpha grid must lie in [0, 1]");
    }
  }
  RocCurve curve;
  curve.source = RocSource::kAlphaSweep;
  curve.alpha_grid.assign(alpha_grid.begin(), alpha_grid.end());
  std::vector<RocPoint> raw;
  for (double alpha : alpha_grid) {
    if (alpha == 0.0 || alpha == 1.0) continue;
    absl::StatusOr<std::vector<AttackDecision>> decisions =
        DecideBatch(fn, targets, alpha);
    if (!decisions.ok()) return decisions.status();
    size_t tp = 0, fp = 0;
    for (size_t i = 0; i < truths.size(); ++i) {
      if ((*decisions)[i].predicted_bit == 1) (truths[i] == 1 ? tp : fp) += 1;
    }
    raw.push_back({static_cast<double>(fp) / counts->negatives,
                   static_cast<double>(tp) / counts->positives});
  }
  std::sort(raw.begin(), raw.end(), [](const RocPoint& a, const RocPoint& b) {
    return a.fpr != b.fpr ? a.fpr < b.fpr : a.tpr < b.tpr;
  });
  PushDistinct(curve.points, {0.0, 0.0});
  for (const RocPoint& p : raw) PushDistinct(curve.points, p);
  PushDistinct(curve.points, {1.0, 1.0});
  curve.auc = TrapezoidAuc(curve.points);
  return curve;
}

absl::StatusOr<RocCurve> RocScoreSweep(std::span<const double> scores,
                                       std::span<const int> truths) {
  if (scores.size() != truths.size()) {
    return absl::InvalidArgumentError("scores and truths differ in length");
  }
  absl::StatusOr<ClassCounts> counts = CountClasses(truths);
  if (!counts.ok()) return counts.status();
  for (double s : scores) {
    if (std::isnan(s)) return absl::InvalidArgumentError("NaN score");
  }
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] > scores[b]; });
  RocCurve curve;
  curve.source = RocSource::kScoreSweep;
  curve.points.push_back({0.0, 0.0});
  size_t tp = 0, fp = 0;
  for (size_t i = 0; i < order.size();) {
    const double value = scores[order[i]];
    while (i < order.size() && scores[order[i]] == value) {
      (truths[order[i]] == 1 ? tp : fp) += 1;
      ++i;
    }
    PushDistinct(curve.points,
                 {static_cast<double>(fp) / counts->negatives,
                  static_cast<double>(tp) / counts->positives});
  }
  curve.auc = TrapezoidAuc(curve.points);
  return curve;
}

double TprAtFpr(const RocCurve& curve, double fpr) {
  const auto& p = curve.points;
  double best = 0.0;
  for (size_t i = 0; i + 1 < p.size(); ++i) {
    const RocPoint& a = p[i];
    const RocPoint& b = p[i + 1];
    if (fpr < a.fpr || fpr > b.fpr) continue;
    double value = b.fpr == a.fpr
                       ? std::max(a.tpr, b.tpr)
                       : a.tpr + (b.tpr - a.tpr) * (fpr - a.fpr) / (b.fpr - a.fpr);
    best = std::max(best, value);
  }
  return best;
}

double FprAtTpr(const RocCurve& curve, double tpr) {
  const auto& p = curve.points;
  double best = 1.0;
  for (size_t i = 0; i + 1 < p.size(); ++i) {
    const RocPoint& a = p[i];
    const RocPoint& b = p[i + 1];
    if (tpr < std::min(a.tpr, b.tpr) || tpr > std::max(a.tpr, b.tpr)) continue;
    double value = b.tpr == a.tpr
                       ? std::min(a.fpr, b.fpr)
                       : a.fpr + (b.fpr - a.fpr) * (tpr - a.tpr) / (b.tpr - a.tpr);
    best = std::min(best, value);
  }
  return best;
}

std::string RocCsv(const RocCurve& curve) {
  std::string out = "fpr,tpr,auc\n";
  const std::string auc = FormatDouble(curve.auc);
  for (const RocPoint& p : curve.points) {
    absl::StrAppend(&out, FormatDouble(p.fpr), ",", FormatDouble(p.tpr), ",",
                    auc, "\n");
  }
  return out;
}

}  // namespace miaudit
