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

#include "miaudit/game.h"

#include <utility>

#include "absl/strings/str_cat.h"
#include "miaudit/parallel.h"
#include "miaudit/random.h"
#include "miaudit/signal_csv.h"

namespace miaudit {
namespace {

constexpr int kMaxRejections = 1 << 20;

// Uniform record from the pool that is not in `dataset`.
absl::StatusOr<RecordId> DrawOutsider(const PopulationPool& pool,
                                      const IdSet& dataset,
                                      const SeedSpec& seed) {
  Rng rng(seed);
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    const auto id = static_cast<RecordId>(rng.UniformBelow(pool.size()));
    if (!dataset.contains(id)) return id;
  }
  return absl::ResourceExhaustedError("could not draw a non-member record");
}

RecordId DrawMember(const Dataset& dataset, const SeedSpec& seed) {
  Rng rng(seed);
  return dataset.record_ids[rng.UniformBelow(dataset.size())];
}

int FlipCoin(const SeedSpec& seed) {
  Rng rng(seed);
  return static_cast<int>(rng.NextU64() >> 63);
}

IdSet ToSet(const Dataset& d) {
  return IdSet(d.record_ids.begin(), d.record_ids.end());
}

Dataset WithRecord(Dataset d, RecordId z) {
  d.record_ids.push_back(z);
  return d;
}

// State fixed across trials.
struct FixedState {
  std::optional<Dataset> dataset;
  IdSet dataset_set;
  std::shared_ptr<const ToyModel> model;
  std::optional<RecordId> record;
};

absl::StatusOr<FixedState> Setup(const PopulationPool& pool,
                                 const GameSpec& spec,
                                 const TrainingAlgorithm& train) {
  FixedState state;
  if (spec.variant == GameVariant::kFixedRecord ||
      spec.variant == GameVariant::kFixedWorstCase) {
    if (spec.fixed_record_id) {
      if (*spec.fixed_record_id < 0 ||
          static_cast<size_t>(*spec.fixed_record_id) >= pool.size()) {
        return absl::InvalidArgumentError("fixed_record_id not in pool");
      }
      state.record = *spec.fixed_record_id;
    } else {
      Rng rng(*spec.fixed_record_seed);
      state.record = static_cast<RecordId>(rng.UniformBelow(pool.size()));
    }
  }
  if (spec.variant == GameVariant::kFixedModel ||
      spec.variant == GameVariant::kFixedWorstCase) {
    IdSet exclude;
    if (state.record) exclude.insert(*state.record);
    absl::StatusOr<Dataset> d = SampleDataset(
        pool, spec.n, WithoutReplacement{}, *spec.fixed_dataset_seed, exclude);
    if (!d.ok()) return d.status();
    state.dataset = *std::move(d);
    state.dataset_set = ToSet(*state.dataset);
  }
  if (spec.variant == GameVariant::kFixedModel) {
    absl::StatusOr<ToyModel> m = train(*state.dataset, *spec.fixed_model_seed);
    if (!m.ok()) {
      return absl::Status(m.status().code(),
                          absl::StrCat("fixed model: ", m.status().message()));
    }
    m->set_id("fixed-model");
    state.model = std::make_shared<const ToyModel>(*std::move(m));
  }
  return state;
}

absl::StatusOr<Challenge> MakeChallenge(const PopulationPool& pool,
                                        const GameSpec& spec,
                                        const FixedState& fixed,
                                        const TrainingAlgorithm& train,
                                        size_t t) {
  const SeedSpec trial = spec.root_seed.Child("trial", t);
  Challenge c;
  c.trial_index = t;
  c.secret_bit = FlipCoin(trial.Child("coin"));

  switch (spec.variant) {
    case GameVariant::kAverageAll:
    case GameVariant::kFixedModel: {
      IdSet members;
      if (spec.variant == GameVariant::kFixedModel) {
        c.model_dataset = *fixed.dataset;
        c.model = fixed.model;
        members = fixed.dataset_set;
      } else {
        absl::StatusOr<Dataset> d = SampleDataset(
            pool, spec.n, WithoutReplacement{}, trial.Child("dataset"));
        if (!d.ok()) return d.status();
        c.model_dataset = *std::move(d);
        members = ToSet(c.model_dataset);
        absl::StatusOr<ToyModel> m =
            train(c.model_dataset, trial.Child("model"));
        if (!m.ok()) return m.status();
        m->set_id(absl::StrCat("trial-", t));
        c.model = std::make_shared<const ToyModel>(*std::move(m));
      }
      RecordId z;
      if (c.secret_bit == 1) {
        z = DrawMember(c.model_dataset, trial.Child("z1"));
      } else {
        absl::StatusOr<RecordId> z0 =
            DrawOutsider(pool, members, trial.Child("z0"));
        if (!z0.ok()) return z0.status();
        z = *z0;
      }
      c.record = pool.record(z);
      c.out_dataset = c.model_dataset;
      c.in_dataset = c.model_dataset;
      return c;
    }
    case GameVariant::kFixedRecord:
    case GameVariant::kFixedWorstCase: {
      const RecordId z = *fixed.record;
      if (spec.variant == GameVariant::kFixedWorstCase) {
        c.out_dataset = *fixed.dataset;
      } else {
        absl::StatusOr<Dataset> d =
            SampleDataset(pool, spec.n, WithoutReplacement{},
                          trial.Child("dataset"), IdSet{z});
        if (!d.ok()) return d.status();
        c.out_dataset = *std::move(d);
      }
      c.in_dataset = WithRecord(c.out_dataset, z);
      c.model_dataset = c.secret_bit == 1 ? c.in_dataset : c.out_dataset;
      absl::StatusOr<ToyModel> m =
          train(c.model_dataset,
                trial.Child(c.secret_bit == 1 ? "model1" : "model0"));
      if (!m.ok()) return m.status();
      m->set_id(absl::StrCat("trial-", t));
      c.model = std::make_shared<const ToyModel>(*std::move(m));
      c.record = pool.record(z);
      return c;
    }
  }
  return absl::InternalError("unknown game variant");
}

}  // namespace

absl::string_view GameVariantName(GameVariant v) {
  switch (v) {
    case GameVariant::kAverageAll:
      return "AverageAll";
    case GameVariant::kFixedModel:
      return "FixedModel";
    case GameVariant::kFixedRecord:
      return "FixedRecord";
    case GameVariant::kFixedWorstCase:
      return "FixedWorstCase";
  }
  return "AverageAll";
}

absl::StatusOr<GameVariant> ParseGameVariant(absl::string_view name) {
  for (GameVariant v : {GameVariant::kAverageAll, GameVariant::kFixedModel,
                        GameVariant::kFixedRecord,
                        GameVariant::kFixedWorstCase}) {
    if (GameVariantName(v) == name) return v;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown game variant '", name, "'"));
}

TrainingAlgorithm SgdAlgorithm(const PopulationPool& pool, TrainConfig config) {
  return [&pool, config](const Dataset& dataset,
                         const SeedSpec& seed) -> absl::StatusOr<ToyModel> {
    TrainConfig c = config;
    c.seed = seed;
    return Train(pool, dataset, c);
  };
}

TrainingAlgorithm PosteriorAlgorithm(const PopulationPool& pool,
                                     PosteriorConfig config) {
  return [&pool, config](const Dataset& dataset,
                         const SeedSpec& seed) -> absl::StatusOr<ToyModel> {
    PosteriorConfig c = config;
    c.seed = seed;
    return PosteriorSample(pool, dataset, c);
  };
}

absl::Status ValidateGameSpec(const GameSpec& spec) {
  if (spec.trials < 1) return absl::InvalidArgumentError("trials must be >= 1");
  if (spec.n < 1) return absl::InvalidArgumentError("n must be >= 1");
  if (!(spec.alpha >= 0.0 && spec.alpha <= 1.0)) {
    return absl::InvalidArgumentError("alpha must lie in [0, 1]");
  }
  const bool has_record = spec.fixed_record_seed || spec.fixed_record_id;
  switch (spec.variant) {
    case GameVariant::kAverageAll:
      break;
    case GameVariant::kFixedModel:
      if (!spec.fixed_dataset_seed || !spec.fixed_model_seed) {
        return absl::InvalidArgumentError(
            "FixedModel requires fixed_dataset_seed and fixed_model_seed");
      }
      break;
    case GameVariant::kFixedRecord:
      if (!has_record) {
        return absl::InvalidArgumentError(
            "FixedRecord requires fixed_record_seed");
      }
      break;
    case GameVariant::kFixedWorstCase:
      if (!spec.fixed_dataset_seed || !has_record) {
        return absl::InvalidArgumentError(
            "FixedWorstCase requires fixed_dataset_seed and "
            "fixed_record_seed");
      }
      break;
  }
  return absl::OkStatus();
}

absl::StatusOr<Transcript> Play(const PopulationPool& pool,
                                const GameSpec& spec,
                                const TrainingAlgorithm& train,
                                const Adversary& adversary) {
  if (absl::Status s = ValidateGameSpec(spec); !s.ok()) return s;
  if (spec.n + 1 > pool.size()) {
    return absl::InvalidArgumentError("pool too small for dataset size");
  }
  absl::StatusOr<FixedState> fixed = Setup(pool, spec, train);
  if (!fixed.ok()) return fixed.status();

  GameContext context;
  context.pool = &pool;
  context.variant = spec.variant;
  if (spec.variant == GameVariant::kFixedWorstCase) {
    context.known_dataset = &*fixed->dataset;
  }

  Transcript transcript;
  transcript.spec = spec;
  transcript.trials.resize(static_cast<size_t>(spec.trials));
  absl::Status status = ParallelFor(
      transcript.trials.size(), spec.workers, [&](size_t t) -> absl::Status {
        absl::StatusOr<Challenge> c =
            MakeChallenge(pool, spec, *fixed, train, t);
        if (!c.ok()) {
          return absl::Status(c.status().code(),
                              absl::StrCat("trial ", t, ": ",
                                           c.status().message()));
        }
        TrialRecord& rec = transcript.trials[t];
        rec.challenge = *std::move(c);
        absl::StatusOr<AdversaryAnswer> answer =
            adversary(AdversaryQuery{rec.challenge, spec.alpha, context});
        if (!answer.ok()) {
          return absl::Status(answer.status().code(),
                              absl::StrCat("trial ", t, ": adversary: ",
                                           answer.status().message()));
        }
        rec.answer = *answer;
        rec.correct = rec.answer.bit == rec.challenge.secret_bit;
        return absl::OkStatus();
      });
  if (!status.ok()) return status;
  return transcript;
}

absl::StatusOr<GameScore> Score(const Transcript& transcript) {
  if (transcript.trials.empty()) {
    return absl::InvalidArgumentError("empty transcript");
  }
  GameScore s;
  for (const TrialRecord& t : transcript.trials) {
    ++s.trials;
    if (t.correct) ++s.correct;
    if (t.challenge.secret_bit == 1) {
      ++s.members;
      if (t.answer.bit == 1) ++s.true_positives;
    } else {
      ++s.nonmembers;
      if (t.answer.bit == 1) ++s.false_positives;
    }
  }
  s.accuracy = static_cast<double>(s.correct) / s.trials;
  if (s.members > 0) s.tpr = static_cast<double>(s.true_positives) / s.members;
  if (s.nonmembers > 0) {
    s.fpr = static_cast<double>(s.false_positives) / s.nonmembers;
  }
  return s;
}

std::string TranscriptCsv(const Transcript& transcript) {
  std::string out = "trial_index,b,b_hat,loss,threshold\n";
  for (const TrialRecord& t : transcript.trials) {
    absl::StrAppend(&out, t.challenge.trial_index, ",", t.challenge.secret_bit,
                    ",", t.answer.bit, ",", FormatDouble(t.answer.loss), ",",
                    FormatDouble(t.answer.threshold), "\n");
  }
  return out;
}

}  // namespace miaudit
