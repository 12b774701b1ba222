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

#ifndef MIAUDIT_ATTACK_H_
#define MIAUDIT_ATTACK_H_

#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "miaudit/model.h"
#include "miaudit/threshold_fn.h"
#include "miaudit/types.h"

namespace miaudit {

struct AttackDecision {
  // 1 = member.
  int predicted_bit = 0;
  double loss = 0.0;
  double threshold = 0.0;
  // threshold - loss; non-negative exactly when predicted member.
  double confidence = 0.0;
  double alpha = 0.0;
};

// Member iff loss <= threshold.
AttackDecision DecideFromLoss(double loss, double threshold, double alpha);

// Decides one challenge: the loss of `model` on `record` against
// c_alpha(model, record).
absl::StatusOr<AttackDecision> Decide(const ThresholdFn& fn,
                                      const ToyModel& model,
                                      const Record& record, double alpha);

// A precomputed (target, loss) pair, e.g. one cell of a signal matrix.
struct ScoredTarget {
  TargetKey target;
  double loss = 0.0;
};

absl::StatusOr<AttackDecision> DecideScored(const ThresholdFn& fn,
                                            const ScoredTarget& target,
                                            double alpha);

// Element-wise DecideScored. The first failure aborts and names its index.
absl::StatusOr<std::vector<AttackDecision>> DecideBatch(
    const ThresholdFn& fn, std::span<const ScoredTarget> targets, double alpha);

TargetKey TargetOf(const ToyModel& model, const Record& record);

// CSV with columns model_id,record_id,attack,alpha,loss,threshold,
// confidence,predicted_bit.
std::string DecisionCsv(AttackKind kind, std::span<const ScoredTarget> targets,
                        std::span<const AttackDecision> decisions);

}  // namespace miaudit

#endif  // MIAUDIT_ATTACK_H_
