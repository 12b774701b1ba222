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

#include "miaudit/threshold_fn.h"

#include "absl/strings/str_cat.h"
#include "miaudit/signal_csv.h"

namespace miaudit {
namespace {

absl::StatusOr<EmpiricalDist> Column(const SignalMatrix& m, size_t col) {
  std::vector<double> values;
  values.reserve(m.rows());
  for (size_t r = 0; r < m.rows(); ++r) values.push_back(m.at(r, col));
  return EmpiricalDist::Create(std::move(values));
}

absl::Status RequireKind(const OutWorldSet& set, OutWorldKind want) {
  if (set.kind != want && set.kind != OutWorldKind::kExternal) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected a ", SignalKindName(want), " set, got ",
                     SignalKindName(set.kind)));
  }
  return absl::OkStatus();
}

// One slot per (set.target_model_id, column).
absl::Status AddModelRecordSlots(const OutWorldSet& set, ThresholdFn& fn) {
  for (size_t c = 0; c < set.matrix.cols(); ++c) {
    absl::StatusOr<EmpiricalDist> dist = Column(set.matrix, c);
    if (!dist.ok()) return dist.status();
    TargetKey key{set.target_model_id, set.matrix.record_ids[c], -1};
    if (absl::Status s = fn.AddSlot(key, *std::move(dist)); !s.ok()) return s;
  }
  return absl::OkStatus();
}

}  // namespace

absl::string_view AttackKindName(AttackKind kind) {
  switch (kind) {
    case AttackKind::kS:
      return "S";
    case AttackKind::kP:
      return "P";
    case AttackKind::kR:
      return "R";
    case AttackKind::kD:
      return "D";
    case AttackKind::kL:
      return "L";
  }
  return "S";
}

absl::StatusOr<AttackKind> ParseAttackKind(absl::string_view name) {
  for (AttackKind k : {AttackKind::kS, AttackKind::kP, AttackKind::kR,
                       AttackKind::kD, AttackKind::kL}) {
    if (AttackKindName(k) == name) return k;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown attack kind '", name, "' (want S|P|R|D|L)"));
}

Dependency DependencyOf(AttackKind kind) {
  switch (kind) {
    case AttackKind::kS:
      return Dependency{.label = true};
    case AttackKind::kP:
      return Dependency{.model = true};
    case AttackKind::kR:
      return Dependency{.record = true};
    case AttackKind::kD:
    case AttackKind::kL:
      return Dependency{.model = true, .record = true};
  }
  return Dependency{};
}

std::string DependencyName(const Dependency& d) {
  std::string out = "{";
  auto add = [&](absl::string_view part) {
    if (out.size() > 1) out += ",";
    absl::StrAppend(&out, part);
  };
  if (d.label) add("label");
  if (d.record) add("record");
  if (d.model) add("model");
  return out + "}";
}

ThresholdFn::ThresholdFn(AttackKind kind, SmoothingMethod method,
                         Dependency dependency)
    : kind_(kind), method_(method), dependency_(dependency) {}

ThresholdFn::SlotKey ThresholdFn::Project(const TargetKey& target) const {
  SlotKey key;
  if (dependency_.model) key.model = target.model_id;
  if (dependency_.record) key.record = target.record_id;
  if (dependency_.label) key.label = target.label;
  return key;
}

std::string ThresholdFn::Describe(const SlotKey& key) {
  std::string out;
  if (!key.model.empty()) absl::StrAppend(&out, "model ", key.model, " ");
  if (key.record >= 0) absl::StrAppend(&out, "record ", key.record, " ");
  if (key.label >= 0) absl::StrAppend(&out, "label ", key.label, " ");
  if (!out.empty()) out.pop_back();
  return out;
}

absl::Status ThresholdFn::AddSlot(const TargetKey& target, EmpiricalDist dist) {
  SlotKey key = Project(target);
  auto [it, inserted] = slots_.emplace(key, std::move(dist));
  if (!inserted) {
    return absl::AlreadyExistsError(
        absl::StrCat("attack ", AttackKindName(kind_), ": slot ",
                     Describe(key), " calibrated twice"));
  }
  return absl::OkStatus();
}

absl::StatusOr<const EmpiricalDist*> ThresholdFn::DistFor(
    const TargetKey& target) const {
  const SlotKey key = Project(target);
  auto it = slots_.find(key);
  if (it == slots_.end()) {
    return absl::NotFoundError(absl::StrCat("attack ", AttackKindName(kind_),
                                            " has no calibration for ",
                                            Describe(key)));
  }
  return &it->second;
}

absl::StatusOr<double> ThresholdFn::Threshold(const TargetKey& target,
                                              double alpha) const {
  absl::StatusOr<const EmpiricalDist*> dist = DistFor(target);
  if (!dist.ok()) return dist.status();
  return SmoothedPercentile(**dist, alpha, method_);
}

absl::StatusOr<double> ThresholdFn::Cdf(const TargetKey& target,
                                        double loss) const {
  absl::StatusOr<const EmpiricalDist*> dist = DistFor(target);
  if (!dist.ok()) return dist.status();
  return SmoothedCdf(**dist, loss, method_);
}

absl::StatusOr<double> ThresholdFn::Score(const TargetKey& target,
                                          double loss) const {
  absl::StatusOr<const EmpiricalDist*> dist = DistFor(target);
  if (!dist.ok()) return dist.status();
  return MembershipScore(**dist, loss, method_);
}

absl::StatusOr<ThresholdFn> CalibrateS(const OutWorldSet& shadow,
                                       SmoothingMethod method) {
  if (absl::Status s = RequireKind(shadow, OutWorldKind::kShadow); !s.ok()) {
    return s;
  }
  if (shadow.grouping.empty()) {
    return absl::InvalidArgumentError("shadow set has no label grouping");
  }
  ThresholdFn fn(AttackKind::kS, method);
  for (const auto& [label, columns] : shadow.grouping) {
    std::vector<double> values;
    for (size_t r = 0; r < shadow.matrix.rows(); ++r) {
      for (size_t c : columns) values.push_back(shadow.matrix.at(r, c));
    }
    absl::StatusOr<EmpiricalDist> dist = EmpiricalDist::Create(std::move(values));
    if (!dist.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("label ", label, ": ", dist.status().message()));
    }
    if (absl::Status s = fn.AddSlot(TargetKey{"", -1, label}, *std::move(dist));
        !s.ok()) {
      return s;
    }
  }
  return fn;
}

absl::StatusOr<ThresholdFn> CalibrateP(std::span<const OutWorldSet> population,
                                       SmoothingMethod method,
                                       bool per_label) {
  Dependency dep = DependencyOf(AttackKind::kP);
  dep.label = per_label;
  ThresholdFn fn(AttackKind::kP, method, dep);
  for (const OutWorldSet& set : population) {
    if (absl::Status s = RequireKind(set, OutWorldKind::kPopulation); !s.ok()) {
      return s;
    }
    if (set.matrix.rows() != 1) {
      return absl::InvalidArgumentError("population set must have one row");
    }
    if (!per_label) {
      absl::StatusOr<EmpiricalDist> dist =
          EmpiricalDist::Create(set.matrix.values);
      if (!dist.ok()) return dist.status();
      if (absl::Status s =
              fn.AddSlot(TargetKey{set.target_model_id}, *std::move(dist));
          !s.ok()) {
        return s;
      }
      continue;
    }
    if (set.grouping.empty()) {
      return absl::InvalidArgumentError(
          "per-label Attack P needs a label grouping");
    }
    for (const auto& [label, columns] : set.grouping) {
      std::vector<double> values;
      for (size_t c : columns) values.push_back(set.matrix.at(0, c));
      absl::StatusOr<EmpiricalDist> dist =
          EmpiricalDist::Create(std::move(values));
      if (!dist.ok()) return dist.status();
      if (absl::Status s = fn.AddSlot(TargetKey{set.target_model_id, -1, label},
                                      *std::move(dist));
          !s.ok()) {
        return s;
      }
    }
  }
  return fn;
}

absl::StatusOr<ThresholdFn> CalibrateR(const OutWorldSet& reference,
                                       SmoothingMethod method) {
  if (absl::Status s = RequireKind(reference, OutWorldKind::kReference);
      !s.ok()) {
    return s;
  }
  ThresholdFn fn(AttackKind::kR, method);
  for (size_t c = 0; c < reference.matrix.cols(); ++c) {
    absl::StatusOr<EmpiricalDist> dist = Column(reference.matrix, c);
    if (!dist.ok()) return dist.status();
    if (absl::Status s = fn.AddSlot(
            TargetKey{"", reference.matrix.record_ids[c], -1}, *std::move(dist));
        !s.ok()) {
      return s;
    }
  }
  return fn;
}

absl::StatusOr<ThresholdFn> CalibrateD(std::span<const OutWorldSet> distilled,
                                       SmoothingMethod method) {
  ThresholdFn fn(AttackKind::kD, method);
  for (const OutWorldSet& set : distilled) {
    if (absl::Status s = RequireKind(set, OutWorldKind::kDistilled); !s.ok()) {
      return s;
    }
    if (absl::Status s = AddModelRecordSlots(set, fn); !s.ok()) return s;
  }
  return fn;
}

absl::StatusOr<ThresholdFn> CalibrateL(std::span<const OutWorldSet> loo,
                                       SmoothingMethod method) {
  ThresholdFn fn(AttackKind::kL, method);
  for (const OutWorldSet& set : loo) {
    if (absl::Status s = RequireKind(set, OutWorldKind::kLeaveOneOut);
        !s.ok()) {
      return s;
    }
    if (absl::Status s = AddModelRecordSlots(set, fn); !s.ok()) return s;
  }
  return fn;
}

absl::StatusOr<std::string> ThresholdCsv(const ThresholdFn& fn,
                                         std::span<const TargetKey> targets,
                                         std::span<const double> alphas) {
  std::string out = "model_id,record_id,label,alpha,threshold\n";
  for (const TargetKey& t : targets) {
    for (double alpha : alphas) {
      absl::StatusOr<double> c = fn.Threshold(t, alpha);
      if (!c.ok()) return c.status();
      absl::StrAppend(&out, t.model_id, ",", t.record_id, ",", t.label, ",",
                      FormatDouble(alpha), ",", FormatDouble(*c), "\n");
    }
  }
  return out;
}

}  // namespace miaudit
