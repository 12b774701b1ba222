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

#ifndef MIAUDIT_THRESHOLD_FN_H_
#define MIAUDIT_THRESHOLD_FN_H_

#include <compare>
#include <map>
#include <span>
#include <string>
#include "absl/strings/string_view.h"
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "miaudit/empirical_dist.h"
#include "miaudit/out_world.h"
#include "miaudit/smoothing.h"
#include "miaudit/types.h"

namespace miaudit {

// Loss-threshold attacks, named by what their threshold is calibrated on:
// Shadow models, Population data, Reference models, Distilled models and
// Leave-one-out retraining.
enum class AttackKind { kS, kP, kR, kD, kL };

absl::string_view AttackKindName(AttackKind kind);
absl::StatusOr<AttackKind> ParseAttackKind(absl::string_view name);

// Which properties of the target a threshold may depend on.
struct Dependency {
  bool label = false;
  bool model = false;
  bool record = false;

  bool operator==(const Dependency&) const = default;
};

//   S -> {label}, P -> {model}, R -> {record}, D -> {record, model},
//   L -> {record, model}.
// A record dependency covers the record's features and its label.
Dependency DependencyOf(AttackKind kind);

std::string DependencyName(const Dependency& d);

// The attacked (model, record) pair as seen by a threshold function.
struct TargetKey {
  std::string model_id;
  RecordId record_id = -1;
  int label = -1;
};

// A calibrated threshold function c_alpha(target). Targets are projected
// onto the attack's dependency before lookup, so two targets that agree on
// the dependency always receive the same threshold.
class ThresholdFn {
 public:
  ThresholdFn(AttackKind kind, SmoothingMethod method, Dependency dependency);
  ThresholdFn(AttackKind kind, SmoothingMethod method)
      : ThresholdFn(kind, method, DependencyOf(kind)) {}

  AttackKind kind() const { return kind_; }
  SmoothingMethod method() const { return method_; }
  const Dependency& dependency() const { return dependency_; }

  // Registers the calibration distribution for the slot `target` projects
  // to. Fails if the slot is already calibrated.
  absl::Status AddSlot(const TargetKey& target, EmpiricalDist dist);

  absl::StatusOr<const EmpiricalDist*> DistFor(const TargetKey& target) const;

  // c_alpha(target).
  absl::StatusOr<double> Threshold(const TargetKey& target, double alpha) const;

  // Smoothed out-world CDF at `loss`: the smallest alpha for which this
  // loss would be flagged as member.
  absl::StatusOr<double> Cdf(const TargetKey& target, double loss) const;

  // MembershipScore of `loss` against the target's slot.
  absl::StatusOr<double> Score(const TargetKey& target, double loss) const;

  size_t slot_count() const { return slots_.size(); }

 private:
  struct SlotKey {
    std::string model;
    RecordId record = -1;
    int label = -1;

    auto operator<=>(const SlotKey&) const = default;
  };

  SlotKey Project(const TargetKey& target) const;
  static std::string Describe(const SlotKey& key);

  AttackKind kind_;
  SmoothingMethod method_;
  Dependency dependency_;
  std::map<SlotKey, EmpiricalDist> slots_;
};

// Attack S: per label, all shadow losses on records of that label.
absl::StatusOr<ThresholdFn> CalibrateS(const OutWorldSet& shadow,
                                       SmoothingMethod method);

// Attack P: per target model, its losses on population records. With
// per_label the slot is (model, label) instead.
absl::StatusOr<ThresholdFn> CalibrateP(std::span<const OutWorldSet> population,
                                       SmoothingMethod method,
                                       bool per_label = false);

// Attack R: per target record, its losses across reference models.
absl::StatusOr<ThresholdFn> CalibrateR(const OutWorldSet& reference,
                                       SmoothingMethod method);

// Attack D: per (target model, record), the record's losses across the
// model's distilled models.
absl::StatusOr<ThresholdFn> CalibrateD(std::span<const OutWorldSet> distilled,
                                       SmoothingMethod method);

// Attack L: per (target model, record), the record's losses across models
// retrained without it.
absl::StatusOr<ThresholdFn> CalibrateL(std::span<const OutWorldSet> loo,
                                       SmoothingMethod method);

// CSV with columns model_id,record_id,label,alpha,threshold.
absl::StatusOr<std::string> ThresholdCsv(const ThresholdFn& fn,
                                         std::span<const TargetKey> targets,
                                         std::span<const double> alphas);

}  // namespace miaudit

#endif  // MIAUDIT_THRESHOLD_FN_H_
