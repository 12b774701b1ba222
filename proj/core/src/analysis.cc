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

#include "miaudit/analysis.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "absl/strings/str_cat.h"
#include "miaudit/random.h"
#include "miaudit/signal_csv.h"

namespace miaudit {
namespace {

// Per record, the fraction of models on which `attack` predicts member.
absl::StatusOr<std::vector<double>> MemberFractions(
    const PartitionInput& input, AttackKind attack) {
  auto it = input.predictions.find(attack);
  if (it == input.predictions.end()) {
    return absl::InvalidArgumentError(
        absl::StrCat("missing predictions of attack ", AttackKindName(attack)));
  }
  const auto& per_model = it->second;
  if (per_model.empty()) return absl::InvalidArgumentError("empty model set");
  std::vector<double> frac(input.record_ids.size(), 0.0);
  for (const std::vector<int>& row : per_model) {
    if (row.size() != input.record_ids.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("attack ", AttackKindName(attack),
                       ": prediction row length does not match records"));
    }
    for (size_t j = 0; j < row.size(); ++j) frac[j] += row[j] == 1 ? 1.0 : 0.0;
  }
  for (double& f : frac) f /= static_cast<double>(per_model.size());
  return frac;
}

}  // namespace

absl::StatusOr<double> Agreement(std::span<const int> a,
                                 std::span<const int> b) {
  if (a.size() != b.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "prediction vectors differ in length (", a.size(), " vs ", b.size(),
        ")"));
  }
  if (a.empty()) return absl::InvalidArgumentError("empty prediction vectors");
  size_t same = 0;
  for (size_t i = 0; i < a.size(); ++i) same += a[i] == b[i] ? 1 : 0;
  return static_cast<double>(same) / static_cast<double>(a.size());
}

absl::StatusOr<AgreementTable> ComputeAgreementTable(
    const std::vector<std::string>& names,
    const std::vector<std::vector<int>>& predictions, std::string split) {
  if (names.size() != predictions.size()) {
    return absl::InvalidArgumentError("names and predictions differ in count");
  }
  AgreementTable table{names, {}, std::move(split)};
  const size_t n = names.size();
  table.rates.assign(n, std::vector<double>(n, 1.0));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      absl::StatusOr<double> r = Agreement(predictions[i], predictions[j]);
      if (!r.ok()) return r.status();
      table.rates[i][j] = table.rates[j][i] = *r;
    }
  }
  return table;
}

std::string AgreementCsv(const AgreementTable& table) {
  std::string out = absl::StrCat("split,attack");
  for (const std::string& n : table.names) absl::StrAppend(&out, ",", n);
  out += "\n";
  for (size_t i = 0; i < table.names.size(); ++i) {
    absl::StrAppend(&out, table.split, ",", table.names[i]);
    for (double r : table.rates[i]) absl::StrAppend(&out, ",", FormatDouble(r));
    out += "\n";
  }
  return out;
}

absl::StatusOr<VulnPartition> PartitionRecords(
    const PartitionInput& input, const PartitionOptions& options) {
  if (!(options.majority > 0.5 && options.majority <= 1.0)) {
    return absl::InvalidArgumentError("majority must lie in (0.5, 1]");
  }
  absl::StatusOr<std::vector<double>> s = MemberFractions(input, AttackKind::kS);
  if (!s.ok()) return s.status();
  absl::StatusOr<std::vector<double>> p = MemberFractions(input, AttackKind::kP);
  if (!p.ok()) return p.status();
  absl::StatusOr<std::vector<double>> r = MemberFractions(input, AttackKind::kR);
  if (!r.ok()) return r.status();
  std::vector<double> d;
  if (options.include_d) {
    absl::StatusOr<std::vector<double>> dd =
        MemberFractions(input, AttackKind::kD);
    if (!dd.ok()) return dd.status();
    d = *std::move(dd);
  }
  const double hi = options.majority;
  const double lo = 1.0 - options.majority;
  // Guards the comparisons against fractions like 0.8 = 8/10 rounding.
  constexpr double kEps = 1e-12;
  auto high = [&](double f) { return f >= hi - kEps; };
  auto low = [&](double f) { return f <= lo + kEps; };
  VulnPartition out;
  out.majority = options.majority;
  for (size_t j = 0; j < input.record_ids.size(); ++j) {
    const RecordId id = input.record_ids[j];
    const double fs = (*s)[j], fp = (*p)[j], fr = (*r)[j];
    if (high(fs) && high(fp) && high(fr) && (d.empty() || high(d[j]))) {
      out.all_correct.push_back(id);
    } else if (high(fr) && low(fs) && low(fp)) {
      out.r_correct.push_back(id);
    } else if (high(fs) && high(fp) && low(fr)) {
      out.sp_correct.push_back(id);
    }
  }
  std::vector<RecordId> shuffled = input.record_ids;
  Rng rng(options.seed.Child("baseline"));
  rng.Shuffle(std::span<RecordId>(shuffled));
  shuffled.resize(std::min(shuffled.size(), options.baseline_size));
  out.random_baseline = std::move(shuffled);
  return out;
}

absl::StatusOr<LooVulnResult> LooVulnerability(const PopulationPool& pool,
                                               const Dataset& fixed_dataset,
                                               RecordId record,
                                               const LooVulnOptions& options) {
  if (!fixed_dataset.Contains(record)) {
    return absl::InvalidArgumentError(
        absl::StrCat("record ", record, " is not in the fixed dataset"));
  }
  LeaveOneOutOptions o{options.num_models, options.train, options.seed,
                       options.workers};
  absl::StatusOr<OutWorldSet> with =
      BuildWithRecord(pool, fixed_dataset, record, o);
  if (!with.ok()) return with.status();
  absl::StatusOr<OutWorldSet> without =
      BuildLeaveOneOut(pool, fixed_dataset, record, o);
  if (!without.ok()) return without.status();
  // Attack L's slot is (model, record); the known dataset plays the model.
  const std::string slot_model = "fixed-dataset";
  without->target_model_id = slot_model;
  absl::StatusOr<ThresholdFn> fn =
      CalibrateL(std::span(&*without, 1), options.method);
  if (!fn.ok()) return fn.status();

  std::vector<ScoredTarget> targets;
  std::vector<int> truths;
  std::vector<double> scores;
  const int label = pool.record(record).label;
  for (const OutWorldSet* set : {&*with, &*without}) {
    const int truth = set == &*with ? 1 : 0;
    for (size_t r = 0; r < set->matrix.rows(); ++r) {
      const double loss = set->matrix.at(r, 0);
      targets.push_back({TargetKey{slot_model, record, label}, loss});
      truths.push_back(truth);
      scores.push_back(-loss);
    }
  }
  LooVulnResult result;
  absl::StatusOr<RocCurve> alpha =
      RocAlphaSweep(*fn, targets, truths, options.alpha_grid);
  if (!alpha.ok()) return alpha.status();
  absl::StatusOr<RocCurve> score = RocScoreSweep(scores, truths);
  if (!score.ok()) return score.status();
  result.alpha_sweep = *std::move(alpha);
  result.score_sweep = *std::move(score);
  result.with_models = *std::move(with);
  result.without_models = *std::move(without);
  return result;
}

absl::StatusOr<EmpiricalDist> LossHistogram(const SignalMatrix& matrix,
                                            std::span<const RecordId> records) {
  if (records.empty()) return absl::InvalidArgumentError("empty record set");
  std::unordered_map<RecordId, size_t> column;
  for (size_t c = 0; c < matrix.record_ids.size(); ++c) {
    column.emplace(matrix.record_ids[c], c);
  }
  std::vector<double> values;
  for (RecordId id : records) {
    auto it = column.find(id);
    if (it == column.end()) {
      return absl::NotFoundError(
          absl::StrCat("record ", id, " is not a column of the signal matrix"));
    }
    for (size_t r = 0; r < matrix.rows(); ++r) {
      values.push_back(matrix.at(r, it->second));
    }
  }
  return EmpiricalDist::Create(std::move(values));
}

std::string HistogramCsv(const std::vector<std::string>& names,
                         const std::vector<EmpiricalDist>& dists, int bins) {
  std::string out = "set,bin_lo,bin_hi,count\n";
  if (dists.empty() || bins < 1) return out;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const EmpiricalDist& d : dists) {
    lo = std::min(lo, d.min());
    hi = std::max(hi, d.max());
  }
  const double width = hi > lo ? (hi - lo) / bins : 1.0;
  for (size_t s = 0; s < dists.size() && s < names.size(); ++s) {
    std::vector<size_t> counts(static_cast<size_t>(bins), 0);
    for (double v : dists[s].losses()) {
      auto b = static_cast<size_t>((v - lo) / width);
      counts[std::min(b, counts.size() - 1)] += 1;
    }
    for (int b = 0; b < bins; ++b) {
      absl::StrAppend(&out, names[s], ",", FormatDouble(lo + b * width), ",",
                      FormatDouble(lo + (b + 1) * width), ",", counts[b], "\n");
    }
  }
  return out;
}

double CosineDistance(std::span<const double> u, std::span<const double> v) {
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (size_t i = 0; i < u.size() && i < v.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 - dot / (std::sqrt(nu) * std::sqrt(nv));
}

absl::StatusOr<std::vector<Neighbor>> LatentNeighbors(
    const Record& query, std::span<const Record> candidates,
    const ToyModel& model, size_t k) {
  if (k > candidates.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "k = ", k, " exceeds the ", candidates.size(), " candidates"));
  }
  absl::StatusOr<std::vector<double>> q = model.Penultimate(query);
  if (!q.ok()) return q.status();
  std::vector<Neighbor> all;
  all.reserve(candidates.size());
  for (const Record& c : candidates) {
    if (c.id == query.id) {
      return absl::InvalidArgumentError(
          absl::StrCat("query record ", query.id, " is among the candidates"));
    }
    absl::StatusOr<std::vector<double>> e = model.Penultimate(c);
    if (!e.ok()) return e.status();
    all.push_back({c.id, CosineDistance(*q, *e)});
  }
  std::partial_sort(all.begin(), all.begin() + static_cast<ptrdiff_t>(k),
                    all.end(), [](const Neighbor& a, const Neighbor& b) {
                      return a.distance != b.distance ? a.distance < b.distance
                                                      : a.id < b.id;
                    });
  all.resize(k);
  return all;
}

std::string ScatterCsv(std::span<const RecordId> records,
                       std::span<const double> a, std::span<const double> b) {
  std::string out = "record_id,confidence_a,confidence_b\n";
  const size_t n = std::min({records.size(), a.size(), b.size()});
  for (size_t i = 0; i < n; ++i) {
    absl::StrAppend(&out, records[i], ",", FormatDouble(a[i]), ",",
                    FormatDouble(b[i]), "\n");
  }
  return out;
}

}  // namespace miaudit
