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

#include "miaudit/attack.h"

#include "absl/strings/str_cat.h"
#include "miaudit/signal_csv.h"

namespace miaudit {

AttackDecision DecideFromLoss(double loss, double threshold, double alpha) {
  AttackDecision d;
  d.loss = loss;
  d.threshold = threshold;
  d.confidence = threshold - loss;
  d.predicted_bit = loss <= threshold ? 1 : 0;
  d.alpha = alpha;
  return d;
}

TargetKey TargetOf(const ToyModel& model, const Record& record) {
  return TargetKey{model.id(), record.id, record.label};
}

absl::StatusOr<AttackDecision> DecideScored(const ThresholdFn& fn,
                                            const ScoredTarget& target,
                                            double alpha) {
  absl::StatusOr<double> c = fn.Threshold(target.target, alpha);
  if (!c.ok()) return c.status();
  return DecideFromLoss(target.loss, *c, alpha);
}

absl::StatusOr<AttackDecision> Decide(const ThresholdFn& fn,
                                      const ToyModel& model,
                                      const Record& record, double alpha) {
  return DecideScored(fn, ScoredTarget{TargetOf(model, record), model.Loss(record)},
                      alpha);
}

absl::StatusOr<std::vector<AttackDecision>> DecideBatch(
    const ThresholdFn& fn, std::span<const ScoredTarget> targets,
    double alpha) {
  std::vector<AttackDecision> out;
  out.reserve(targets.size());
  for (size_t i = 0; i < targets.size(); ++i) {
    absl::StatusOr<AttackDecision> d = DecideScored(fn, targets[i], alpha);
    if (!d.ok()) {
      return absl::Status(d.status().code(),
                          absl::StrCat("challenge ", i, ": ",
                                       d.status().message()));
    }
    out.push_back(*d);
  }
  return out;
}

std::string DecisionCsv(AttackKind kind, std::span<const ScoredTarget> targets,
                        std::span<const AttackDecision> decisions) {
  std::string out =
      "model_id,record_id,attack,alpha,loss,threshold,confidence,"
      "predicted_bit\n";
  const size_t n = std::min(targets.size(), decisions.size());
  for (size_t i = 0; i < n; ++i) {
    const AttackDecision& d = decisions[i];
    absl::StrAppend(&out, targets[i].target.model_id, ",",
                    targets[i].target.record_id, ",", AttackKindName(kind), ",",
                    FormatDouble(d.alpha), ",", FormatDouble(d.loss), ",",
                    FormatDouble(d.threshold), ",", FormatDouble(d.confidence),
                    ",", d.predicted_bit, "\n");
  }
  return out;
}

}  // namespace miaudit
