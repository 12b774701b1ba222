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


#include "commands.h"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <map>
#include <memory>
#include <set>

#include "absl/status/statusor.h"
#include "absl/strings/match.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "miaudit/analysis.h"
#include "miaudit/attack.h"
#include "miaudit/empirical_dist.h"
#include "miaudit/game.h"
#include "miaudit/lemma1.h"
#include "miaudit/model.h"
#include "miaudit/online_attack.h"
#include "miaudit/out_world.h"
#include "miaudit/parallel.h"
#include "miaudit/population.h"
#include "miaudit/roc.h"
#include "miaudit/seed.h"
#include "miaudit/signal_csv.h"
#include "miaudit/threshold_fn.h"
#include "miaudit/trainer.h"

namespace miaudit::cli {
namespace {

#define MIAUDIT_RETURN_IF_ERROR(expr)                  \
  do {                                                 \
    if (absl::Status _s = (expr); !_s.ok()) return _s; \
  } while (false)

#define MIAUDIT_ASSIGN_OR_RETURN(lhs, expr) \
  auto lhs##_or = (expr);                   \
  if (!lhs##_or.ok()) return lhs##_or.status(); \
  auto lhs = *std::move(lhs##_or)

constexpr absl::string_view kHashPrefix = "# config_hash=";
constexpr absl::string_view kPoolPrefix = "#pool ";
constexpr int kHistogramBins = 20;

std::string PathOf(const ExperimentConfig& c, absl::string_view rel) {
  return (std::filesystem::path(c.output_dir) / std::string(rel)).string();
}

absl::Status EnsureParent(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(
      std::filesystem::path(path).parent_path(), ec);
  if (ec) {
    return absl::InternalError(
        absl::StrCat("cannot create directory for ", path, ": ", ec.message()));
  }
  return absl::OkStatus();
}

absl::Status WriteOutput(const ExperimentConfig& c, absl::string_view rel,
                         absl::string_view body) {
  const std::string path = PathOf(c, rel);
  MIAUDIT_RETURN_IF_ERROR(EnsureParent(path));
  return WriteTextFile(path, absl::StrCat(kHashPrefix, c.hash, "\n", body));
}

// Reads an artifact written by an upstream command. Fails if it is missing
// or was produced under a different config.
absl::StatusOr<std::string> ReadInput(const ExperimentConfig& c,
                                      absl::string_view rel,
                                      absl::string_view producer) {
  const std::string path = PathOf(c, rel);
  if (!std::filesystem::exists(path)) {
    return absl::FailedPreconditionError(absl::StrCat(
        "missing input ", path, "; run '", producer, "' first"));
  }
  MIAUDIT_ASSIGN_OR_RETURN(text, ReadTextFile(path));
  const std::string expected = absl::StrCat(kHashPrefix, c.hash, "\n");
  if (!absl::StartsWith(text, expected)) {
    return absl::FailedPreconditionError(absl::StrCat(
        path, " was produced by a different config; rerun '", producer, "'"));
  }
  return text.substr(expected.size());
}

std::vector<absl::string_view> DataLines(absl::string_view text) {
  std::vector<absl::string_view> out;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    if (line.empty() || line[0] == '#') continue;
    out.push_back(line);
  }
  return out;
}

absl::Status LineError(absl::string_view file, size_t line,
                       absl::string_view what) {
  return absl::InvalidArgumentError(
      absl::StrCat(file, " data line ", line, ": ", what));
}

template <typename T>
bool ParseNumber(absl::string_view s, T& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

// ---------------------------------------------------------------------------
// Artifacts.

std::string EncodePool(const PopulationPool& pool) {
  std::string out = absl::StrCat(kPoolPrefix, "id=", pool.id,
                                 " classes=", pool.num_classes, "\n");
  out += "id,label";
  for (int j = 0; j < pool.dim; ++j) absl::StrAppend(&out, ",x", j);
  out += "\n";
  for (const Record& r : pool.records) {
    absl::StrAppend(&out, r.id, ",", r.label);
    for (double x : r.features) absl::StrAppend(&out, ",", FormatDouble(x));
    out += "\n";
  }
  return out;
}

absl::StatusOr<PopulationPool> LoadPool(const ExperimentConfig& c) {
  MIAUDIT_ASSIGN_OR_RETURN(text, ReadInput(c, "pool.csv", "synth"));
  PopulationPool pool;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    if (!absl::StartsWith(line, kPoolPrefix)) continue;
    for (absl::string_view kv :
         absl::StrSplit(line.substr(kPoolPrefix.size()), ' ')) {
      std::pair<std::string, std::string> p = absl::StrSplit(kv, '=');
      if (p.first == "id") pool.id = p.second;
      if (p.first == "classes" && !absl::SimpleAtoi(p.second, &pool.num_classes)) {
        return absl::InvalidArgumentError("pool.csv: bad class count");
      }
    }
  }
  std::vector<absl::string_view> lines = DataLines(text);
  if (lines.empty()) return absl::InvalidArgumentError("pool.csv: no header");
  pool.dim = static_cast<int>(
      std::vector<absl::string_view>(absl::StrSplit(lines[0], ',')).size() - 2);
  pool.class_scale = c.population.class_scale;
  for (size_t i = 1; i < lines.size(); ++i) {
    std::vector<absl::string_view> cells = absl::StrSplit(lines[i], ',');
    if (cells.size() != static_cast<size_t>(pool.dim) + 2) {
      return LineError("pool.csv", i + 1, "wrong cell count");
    }
    Record r;
    if (!ParseNumber(cells[0], r.id) || !ParseNumber(cells[1], r.label) ||
        r.id != static_cast<RecordId>(i - 1) || r.label < 0 ||
        r.label >= pool.num_classes) {
      return LineError("pool.csv", i + 1, "bad id or label");
    }
    r.features.resize(static_cast<size_t>(pool.dim));
    for (int j = 0; j < pool.dim; ++j) {
      if (!ParseNumber(cells[static_cast<size_t>(j) + 2],
                       r.features[static_cast<size_t>(j)])) {
        return LineError("pool.csv", i + 1, "bad feature value");
      }
    }
    pool.records.push_back(std::move(r));
  }
  if (pool.dim != c.population.dim ||
      pool.num_classes != c.population.classes ||
      pool.size() != c.population.pool_size) {
    return absl::FailedPreconditionError(
        "pool.csv does not match [population]; rerun 'synth'");
  }
  return pool;
}

struct TargetEntry {
  std::shared_ptr<ToyModel> model;
  Dataset dataset;
};

struct ChallengeRow {
  std::string model_id;
  RecordId record_id = 0;
  int member = 0;
};

// Everything downstream of 'train'.
struct Workspace {
  PopulationPool pool;
  std::vector<TargetEntry> targets;
  std::vector<ChallengeRow> challenges;

  const TargetEntry* Find(const std::string& id) const {
    for (const TargetEntry& t : targets) {
      if (t.model->id() == id) return &t;
    }
    return nullptr;
  }
  std::vector<RecordId> ChallengeIds(const std::string& model_id) const {
    std::vector<RecordId> out;
    for (const ChallengeRow& r : challenges) {
      if (r.model_id == model_id) out.push_back(r.record_id);
    }
    return out;
  }
};

std::string ModelPath(const std::string& id) {
  return absl::StrCat("models/", id, ".model");
}

absl::StatusOr<Workspace> LoadWorkspace(const ExperimentConfig& c) {
  Workspace ws;
  MIAUDIT_ASSIGN_OR_RETURN(pool, LoadPool(c));
  ws.pool = std::move(pool);

  MIAUDIT_ASSIGN_OR_RETURN(targets, ReadInput(c, "targets.csv", "train"));
  std::vector<absl::string_view> lines = DataLines(targets);
  for (size_t i = 1; i < lines.size(); ++i) {
    std::vector<absl::string_view> cells = absl::StrSplit(lines[i], ',');
    if (cells.size() != 4) return LineError("targets.csv", i + 1, "need 4 cells");
    TargetEntry t;
    t.dataset.pool_ref = ws.pool.id;
    for (absl::string_view id : absl::StrSplit(cells[3], ' ')) {
      RecordId r = 0;
      if (!ParseNumber(id, r)) return LineError("targets.csv", i + 1, "bad id");
      t.dataset.record_ids.push_back(r);
    }
    MIAUDIT_RETURN_IF_ERROR(ValidateDataset(t.dataset, ws.pool.size()));
    const std::string model_id(cells[0]);
    MIAUDIT_ASSIGN_OR_RETURN(text, ReadInput(c, ModelPath(model_id), "train"));
    MIAUDIT_ASSIGN_OR_RETURN(model, DeserializeModel(text));
    if (model.id() != model_id ||
        model.dataset_fingerprint() != DatasetFingerprint(t.dataset)) {
      return absl::FailedPreconditionError(absl::StrCat(
          ModelPath(model_id), " does not match targets.csv; rerun 'train'"));
    }
    t.model = std::make_shared<ToyModel>(std::move(model));
    ws.targets.push_back(std::move(t));
  }

  MIAUDIT_ASSIGN_OR_RETURN(challenges, ReadInput(c, "challenges.csv", "train"));
  lines = DataLines(challenges);
  for (size_t i = 1; i < lines.size(); ++i) {
    std::vector<absl::string_view> cells = absl::StrSplit(lines[i], ',');
    ChallengeRow row;
    if (cells.size() != 3 || !ParseNumber(cells[1], row.record_id) ||
        !ParseNumber(cells[2], row.member) ||
        row.record_id >= static_cast<RecordId>(ws.pool.size())) {
      return LineError("challenges.csv", i + 1, "bad row");
    }
    row.model_id = std::string(cells[0]);
    if (ws.Find(row.model_id) == nullptr) {
      return LineError("challenges.csv", i + 1, "unknown model");
    }
    ws.challenges.push_back(std::move(row));
  }
  return ws;
}

std::vector<ScoredTarget> ScoreChallenges(const Workspace& ws,
                                          std::vector<int>* truths) {
  std::vector<ScoredTarget> out;
  for (const ChallengeRow& row : ws.challenges) {
    const ToyModel& m = *ws.Find(row.model_id)->model;
    const Record& r = ws.pool.record(row.record_id);
    out.push_back({TargetOf(m, r), m.Loss(r)});
    if (truths != nullptr) truths->push_back(row.member);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Out worlds.

SeedSpec Root(const ExperimentConfig& c) { return SeedSpec(c.root_seed); }

TrainConfig DistillTrainConfig(const ExperimentConfig& c) {
  TrainConfig t = c.training.train;
  if (c.attack.distill_epochs > 0) {
    t.epochs = static_cast<int>(c.attack.distill_epochs);
  }
  return t;
}

std::string SignalPath(AttackKind kind, const std::string& model_id) {
  switch (kind) {
    case AttackKind::kS:
      return "signals/shadow.csv";
    case AttackKind::kR:
      return "signals/reference.csv";
    case AttackKind::kP:
      return absl::StrCat("signals/population_", model_id, ".csv");
    case AttackKind::kD:
      return absl::StrCat("signals/distilled_", model_id, ".csv");
    case AttackKind::kL:
      break;
  }
  return "";
}

std::vector<RecordId> AllChallengeIds(const Workspace& ws) {
  std::set<RecordId> ids;
  for (const ChallengeRow& r : ws.challenges) ids.insert(r.record_id);
  return {ids.begin(), ids.end()};
}

absl::StatusOr<ThresholdFn> Calibrate(const ExperimentConfig& c,
                                      const Workspace& ws, AttackKind kind) {
  const SmoothingMethod method = c.attack.method;
  auto ingest = [&](const std::string& model_id)
      -> absl::StatusOr<OutWorldSet> {
    const std::string path = PathOf(c, SignalPath(kind, model_id));
    if (!std::filesystem::exists(path)) {
      return absl::FailedPreconditionError(
          absl::StrCat("missing input ", path, "; run 'signals' first"));
    }
    absl::StatusOr<OutWorldSet> set = Ingest(path, &ws.pool);
    if (set.ok()) set->target_model_id = model_id;
    return set;
  };
  if (kind == AttackKind::kS || kind == AttackKind::kR) {
    MIAUDIT_ASSIGN_OR_RETURN(set, ingest(""));
    return kind == AttackKind::kS ? CalibrateS(set, method)
                                  : CalibrateR(set, method);
  }
  std::vector<OutWorldSet> sets;
  for (const TargetEntry& t : ws.targets) {
    MIAUDIT_ASSIGN_OR_RETURN(set, ingest(t.model->id()));
    sets.push_back(std::move(set));
  }
  return kind == AttackKind::kP ? CalibrateP(sets, method)
                                : CalibrateD(sets, method);
}

// ---------------------------------------------------------------------------
// Reports.

std::string FormatAlpha(double a) { return FormatDouble(a); }

absl::StatusOr<std::string> DecisionsFor(const ExperimentConfig& c,
                                         const ThresholdFn& fn,
                                         std::span<const ScoredTarget> targets) {
  std::string out;
  for (size_t i = 0; i < c.attack.alphas.size(); ++i) {
    MIAUDIT_ASSIGN_OR_RETURN(
        decisions, DecideBatch(fn, targets, c.attack.alphas[i]));
    std::string csv = DecisionCsv(fn.kind(), targets, decisions);
    if (i > 0) csv = csv.substr(csv.find('\n') + 1);
    out += csv;
  }
  return out;
}

}  // namespace

absl::StatusOr<ExperimentConfig> ResolveConfig(ExperimentConfig config,
                                               const RunOptions& options) {
  if (!options.out_dir.empty()) config.output_dir = options.out_dir;
  if (config.output_dir.empty()) {
    return absl::InvalidArgumentError(
        "no output directory: pass --out or set output.dir");
  }
  std::string overrides;
  if (options.alphas.has_value()) {
    config.attack.alphas = *options.alphas;
    std::vector<std::string> parts;
    for (double a : *options.alphas) parts.push_back(FormatDouble(a));
    absl::StrAppend(&overrides, "alphas=", absl::StrJoin(parts, ","), ";");
  }
  if (options.method.has_value()) {
    config.attack.method = *options.method;
    absl::StrAppend(&overrides, "method=", SmoothingMethodName(*options.method),
                    ";");
  }
  if (!overrides.empty()) {
    config.hash = absl::StrFormat(
        "%016x", Fnv1a64(absl::StrCat(config.hash, ";", overrides)));
  }
  return config;
}

absl::Status CmdSynth(const ExperimentConfig& c, int /*workers*/) {
  const PopulationSection& p = c.population;
  MIAUDIT_ASSIGN_OR_RETURN(
      pool, GenPopulation(p.dim, p.classes, p.pool_size, p.class_scale,
                          Root(c).Child("pool")));
  return WriteOutput(c, "pool.csv", EncodePool(pool));
}

absl::Status CmdTrain(const ExperimentConfig& c, int workers) {
  MIAUDIT_ASSIGN_OR_RETURN(pool, LoadPool(c));
  const int n_targets = c.training.num_targets;
  std::vector<TargetEntry> targets(static_cast<size_t>(n_targets));
  std::vector<std::vector<RecordId>> nonmembers(targets.size());
  MIAUDIT_RETURN_IF_ERROR(ParallelFor(
      targets.size(), workers, [&](size_t t) -> absl::Status {
        const SeedSpec ts = Root(c).Child("target", t);
        MIAUDIT_ASSIGN_OR_RETURN(
            dataset, SampleDataset(pool, c.training.dataset_size,
                                   WithoutReplacement{}, ts.Child("dataset")));
        TrainConfig config = c.training.train;
        config.seed = ts.Child("train");
        MIAUDIT_ASSIGN_OR_RETURN(model, Train(pool, dataset, config));
        model.set_id(absl::StrCat("target-", t));
        IdSet members(dataset.record_ids.begin(), dataset.record_ids.end());
        MIAUDIT_ASSIGN_OR_RETURN(
            non, SampleIds(pool, c.attack.nonmembers, ts.Child("nonmembers"),
                           members));
        targets[t] = {std::make_shared<ToyModel>(std::move(model)),
                      std::move(dataset)};
        nonmembers[t] = std::move(non);
        return absl::OkStatus();
      }));

  std::string targets_csv =
      "model_id,dataset_fingerprint,train_fingerprint,record_ids\n";
  std::string challenges_csv = "model_id,record_id,member\n";
  std::string fingerprints = "model_id,dataset_fingerprint,train_fingerprint\n";
  for (size_t t = 0; t < targets.size(); ++t) {
    const ToyModel& m = *targets[t].model;
    const std::string fps = absl::StrFormat(
        "%016x,%016x", m.dataset_fingerprint(), m.train_fingerprint());
    absl::StrAppend(&targets_csv, m.id(), ",", fps, ",",
                    absl::StrJoin(targets[t].dataset.record_ids, " "), "\n");
    absl::StrAppend(&fingerprints, m.id(), ",", fps, "\n");
    MIAUDIT_RETURN_IF_ERROR(
        WriteOutput(c, ModelPath(m.id()), SerializeModel(m)));
    for (RecordId id : targets[t].dataset.record_ids) {
      absl::StrAppend(&challenges_csv, m.id(), ",", id, ",1\n");
    }
    for (RecordId id : nonmembers[t]) {
      absl::StrAppend(&challenges_csv, m.id(), ",", id, ",0\n");
    }
  }
  MIAUDIT_RETURN_IF_ERROR(WriteOutput(c, "targets.csv", targets_csv));
  MIAUDIT_RETURN_IF_ERROR(WriteOutput(c, "fingerprints.csv", fingerprints));
  return WriteOutput(c, "challenges.csv", challenges_csv);
}

absl::Status CmdSignals(const ExperimentConfig& c, int workers) {
  MIAUDIT_ASSIGN_OR_RETURN(ws, LoadWorkspace(c));
  const std::vector<RecordId> all_ids = AllChallengeIds(ws);
  const IdSet all_set(all_ids.begin(), all_ids.end());
  const AttackSection& a = c.attack;
  std::vector<std::pair<std::string, OutWorldSet>> outputs;
  for (AttackKind kind : a.kinds) {
    switch (kind) {
      case AttackKind::kS: {
        ShadowOptions o{c.training.dataset_size, a.n_shadow,
                        a.shadow_eval_per_class, c.training.train,
                        Root(c).Child("shadow"), workers};
        MIAUDIT_ASSIGN_OR_RETURN(set, BuildShadow(ws.pool, o, all_set));
        outputs.emplace_back(SignalPath(kind, ""), std::move(set));
        break;
      }
      case AttackKind::kR: {
        ReferenceOptions o{c.training.dataset_size, a.n_reference,
                           c.training.train, Root(c).Child("reference"),
                           workers};
        MIAUDIT_ASSIGN_OR_RETURN(set, BuildReference(ws.pool, all_ids, o));
        outputs.emplace_back(SignalPath(kind, ""), std::move(set));
        break;
      }
      case AttackKind::kP:
      case AttackKind::kD:
        for (size_t t = 0; t < ws.targets.size(); ++t) {
          const TargetEntry& target = ws.targets[t];
          const std::string& id = target.model->id();
          IdSet members(target.dataset.record_ids.begin(),
                        target.dataset.record_ids.end());
          absl::StatusOr<OutWorldSet> set;
          if (kind == AttackKind::kP) {
            members.insert(all_ids.begin(), all_ids.end());
            set = BuildPopulation(*target.model, ws.pool, a.m_per_class,
                                  Root(c).Child("population", t), members);
          } else {
            DistilledOptions o{a.distill_size, a.n_distilled,
                               DistillTrainConfig(c),
                               Root(c).Child("distilled", t), workers};
            set = BuildDistilled(*target.model, ws.pool, ws.ChallengeIds(id),
                                 o);
          }
          if (!set.ok()) return set.status();
          outputs.emplace_back(SignalPath(kind, id), *std::move(set));
        }
        break;
      case AttackKind::kL:
        return absl::InvalidArgumentError("attack L is not a pipeline attack");
    }
  }
  std::string manifest = "file,kind,rows,cols\n";
  for (const auto& [rel, set] : outputs) {
    const std::string path = PathOf(c, rel);
    MIAUDIT_RETURN_IF_ERROR(EnsureParent(path));
    MIAUDIT_RETURN_IF_ERROR(WriteSignalFile(path, set.matrix, set.kind));
    absl::StrAppend(&manifest, rel, ",", SignalKindName(set.kind), ",",
                    set.matrix.rows(), ",", set.matrix.cols(), "\n");
  }
  return WriteOutput(c, "signals/manifest.csv", manifest);
}

absl::Status CmdAttack(const ExperimentConfig& c, int /*workers*/) {
  MIAUDIT_ASSIGN_OR_RETURN(ws, LoadWorkspace(c));
  const std::vector<ScoredTarget> targets = ScoreChallenges(ws, nullptr);
  for (AttackKind kind : c.attack.kinds) {
    MIAUDIT_ASSIGN_OR_RETURN(fn, Calibrate(c, ws, kind));
    MIAUDIT_ASSIGN_OR_RETURN(csv, DecisionsFor(c, fn, targets));
    MIAUDIT_RETURN_IF_ERROR(WriteOutput(
        c, absl::StrCat("decisions_", AttackKindName(kind), ".csv"), csv));
  }
  return absl::OkStatus();
}

absl::Status CmdEval(const ExperimentConfig& c, int /*workers*/) {
  MIAUDIT_ASSIGN_OR_RETURN(ws, LoadWorkspace(c));
  std::vector<int> truths;
  const std::vector<ScoredTarget> targets = ScoreChallenges(ws, &truths);

  std::string summary;
  absl::StrAppend(&summary, "targets=", ws.targets.size(),
                  " dataset_size=", c.training.dataset_size,
                  " nonmembers_per_target=", c.attack.nonmembers,
                  " method=", SmoothingMethodName(c.attack.method), "\n");
  std::vector<std::string> names;
  std::map<double, std::vector<std::vector<int>>> bits;
  std::optional<std::pair<double, AttackKind>> best;
  for (AttackKind kind : c.attack.kinds) {
    MIAUDIT_ASSIGN_OR_RETURN(fn, Calibrate(c, ws, kind));
    std::vector<double> scores;
    for (const ScoredTarget& t : targets) {
      MIAUDIT_ASSIGN_OR_RETURN(s, fn.Score(t.target, t.loss));
      scores.push_back(s);
    }
    MIAUDIT_ASSIGN_OR_RETURN(curve, RocScoreSweep(scores, truths));
    MIAUDIT_ASSIGN_OR_RETURN(
        alpha_curve, RocAlphaSweep(fn, targets, truths, DefaultAlphaGrid()));
    const std::string name(AttackKindName(kind));
    MIAUDIT_RETURN_IF_ERROR(
        WriteOutput(c, absl::StrCat("roc_", name, ".csv"), RocCsv(curve)));
    MIAUDIT_RETURN_IF_ERROR(WriteOutput(
        c, absl::StrCat("roc_alpha_", name, ".csv"), RocCsv(alpha_curve)));
    int models = 0;
    switch (kind) {
      case AttackKind::kS: models = c.attack.n_shadow; break;
      case AttackKind::kR: models = c.attack.n_reference; break;
      case AttackKind::kD: models = c.attack.n_distilled; break;
      default: break;
    }
    absl::StrAppend(&summary, "attack ", name, ": AUC=",
                    absl::StrFormat("%.4f", curve.auc));
    if (kind == AttackKind::kP) {
      absl::StrAppend(&summary, " population_per_class=", c.attack.m_per_class);
    } else {
      absl::StrAppend(&summary, " models=", models);
    }
    absl::StrAppend(&summary, " TPR@FPR=0.01:",
                    absl::StrFormat("%.4f", TprAtFpr(curve, 0.01)),
                    " TPR@FPR=0.1:",
                    absl::StrFormat("%.4f", TprAtFpr(curve, 0.1)), "\n");
    if (!best.has_value() || curve.auc > best->first) {
      best = {curve.auc, kind};
    }
    names.push_back(name);
    for (double alpha : c.attack.alphas) {
      MIAUDIT_ASSIGN_OR_RETURN(decisions, DecideBatch(fn, targets, alpha));
      std::vector<int> b;
      for (const AttackDecision& d : decisions) b.push_back(d.predicted_bit);
      bits[alpha].push_back(std::move(b));
    }
  }
  absl::StrAppend(&summary, "highest AUC: Attack ",
                  AttackKindName(best->second), " (AUC = ",
                  absl::StrFormat("%.4f", best->first), ")\n");
  MIAUDIT_RETURN_IF_ERROR(WriteOutput(c, "summary.txt", summary));

  // Agreement tables per alpha, split by ground truth.
  names.push_back("GT");
  std::string agreement;
  for (double alpha : c.attack.alphas) {
    for (int member : {1, 0}) {
      std::vector<std::vector<int>> preds;
      for (const std::vector<int>& b : bits[alpha]) {
        std::vector<int> sel;
        for (size_t i = 0; i < b.size(); ++i) {
          if (truths[i] == member) sel.push_back(b[i]);
        }
        preds.push_back(std::move(sel));
      }
      std::vector<int> gt(preds.front().size(), member);
      preds.push_back(std::move(gt));
      MIAUDIT_ASSIGN_OR_RETURN(
          table, ComputeAgreementTable(
                     names, preds,
                     absl::StrCat(member ? "members" : "nonmembers",
                                  "@alpha=", FormatAlpha(alpha))));
      std::string csv = AgreementCsv(table);
      if (!agreement.empty()) csv = csv.substr(csv.find('\n') + 1);
      agreement += csv;
    }
  }
  MIAUDIT_RETURN_IF_ERROR(WriteOutput(c, "agreement.csv", agreement));

  // Target-model losses of members against non-members.
  std::vector<double> member_losses, nonmember_losses;
  for (size_t i = 0; i < targets.size(); ++i) {
    (truths[i] ? member_losses : nonmember_losses).push_back(targets[i].loss);
  }
  MIAUDIT_ASSIGN_OR_RETURN(md, EmpiricalDist::Create(member_losses));
  MIAUDIT_ASSIGN_OR_RETURN(nd, EmpiricalDist::Create(nonmember_losses));
  MIAUDIT_RETURN_IF_ERROR(WriteOutput(
      c, "histogram.csv",
      HistogramCsv({"members", "nonmembers"}, {md, nd}, kHistogramBins)));
  return absl::OkStatus();
}

absl::Status CmdGame(const ExperimentConfig& c, int workers) {
  if (!c.game.has_value()) {
    return absl::InvalidArgumentError("config has no [game] section");
  }
  MIAUDIT_ASSIGN_OR_RETURN(pool, LoadPool(c));
  const GameSection& g = *c.game;
  const SeedSpec seed = Root(c).Child("game");
  GameSpec spec;
  spec.variant = g.variant;
  spec.n = c.training.dataset_size;
  spec.trials = g.trials;
  spec.root_seed = seed;
  spec.alpha = g.alpha;
  spec.workers = workers;
  spec.fixed_dataset_seed = seed.Child("fixed_dataset");
  spec.fixed_model_seed = seed.Child("fixed_model");
  spec.fixed_record_seed = seed.Child("fixed_record");

  OnlineAttackOptions o;
  o.kind = g.adversary;
  o.method = c.attack.method;
  o.dataset_size = c.training.dataset_size;
  o.num_models = g.adversary_models;
  o.eval_per_class = c.attack.shadow_eval_per_class;
  o.m_per_class = c.attack.m_per_class;
  o.distill_size = c.attack.distill_size;
  o.train = g.adversary == AttackKind::kD ? DistillTrainConfig(c)
                                          : c.training.train;
  o.seed = Root(c).Child("adversary");
  o.workers = 1;
  MIAUDIT_ASSIGN_OR_RETURN(adversary, MakeOnlineAdversary(pool, o));
  MIAUDIT_ASSIGN_OR_RETURN(
      transcript,
      Play(pool, spec, SgdAlgorithm(pool, c.training.train), adversary));
  MIAUDIT_ASSIGN_OR_RETURN(score, Score(transcript));
  MIAUDIT_RETURN_IF_ERROR(
      WriteOutput(c, "transcript.csv", TranscriptCsv(transcript)));
  auto opt = [](const std::optional<double>& v) {
    return v.has_value() ? absl::StrFormat("%.4f", *v) : std::string("n/a");
  };
  return WriteOutput(
      c, "game_summary.txt",
      absl::StrCat("variant=", GameVariantName(g.variant),
                   " adversary=", AttackKindName(g.adversary),
                   " alpha=", FormatDouble(g.alpha), "\n",
                   "trials=", score.trials, " members=", score.members,
                   " nonmembers=", score.nonmembers, "\n",
                   "accuracy=", absl::StrFormat("%.4f", score.accuracy),
                   " tpr=", opt(score.tpr), " fpr=", opt(score.fpr), "\n"));
}

absl::Status CmdLemma1(const ExperimentConfig& c, int workers) {
  if (!c.lemma1.has_value()) {
    return absl::InvalidArgumentError("config has no [lemma1] section");
  }
  const Lemma1Section& l = *c.lemma1;
  const SeedSpec seed = Root(c).Child("lemma1");
  MIAUDIT_ASSIGN_OR_RETURN(
      pool, GenPopulation(1, 2, l.pool_size, l.class_scale, seed.Child("pool")));
  Lemma1Options o;
  o.n = l.n;
  o.temperature = l.temperature;
  o.trials = l.trials;
  o.grid_cells = l.grid_cells;
  o.importance_samples = l.importance_samples;
  o.seed = seed;
  o.workers = workers;
  MIAUDIT_ASSIGN_OR_RETURN(r, Lemma1Experiment(pool, o));
  MIAUDIT_RETURN_IF_ERROR(
      WriteOutput(c, "lemma1_roc_loss.csv", RocCsv(r.loss_threshold)));
  MIAUDIT_RETURN_IF_ERROR(
      WriteOutput(c, "lemma1_roc_oracle.csv", RocCsv(r.bayes_oracle)));
  return WriteOutput(
      c, "lemma1.txt",
      absl::StrFormat("pool_size=%d n=%d temperature=%s trials=%d "
                      "enumerated=%d\n"
                      "auc_loss_threshold=%.4f\nauc_bayes_oracle=%.4f\n"
                      "gap=%.4f\nself_test_deviation=%.3e\n",
                      l.pool_size, l.n, FormatDouble(l.temperature), l.trials,
                      r.enumerated ? 1 : 0, r.auc_loss_threshold,
                      r.auc_bayes_oracle, r.gap, r.self_test_deviation));
}

absl::Status CmdPipeline(const ExperimentConfig& c, int workers) {
  MIAUDIT_RETURN_IF_ERROR(CmdSynth(c, workers));
  MIAUDIT_RETURN_IF_ERROR(CmdTrain(c, workers));
  MIAUDIT_RETURN_IF_ERROR(CmdSignals(c, workers));
  MIAUDIT_RETURN_IF_ERROR(CmdAttack(c, workers));
  MIAUDIT_RETURN_IF_ERROR(CmdEval(c, workers));
  if (c.game.has_value()) MIAUDIT_RETURN_IF_ERROR(CmdGame(c, workers));
  if (c.lemma1.has_value()) MIAUDIT_RETURN_IF_ERROR(CmdLemma1(c, workers));
  return absl::OkStatus();
}

}  // namespace miaudit::cli
