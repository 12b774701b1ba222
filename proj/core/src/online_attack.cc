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

#include "miaudit/online_attack.h"

#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "absl/strings/str_cat.h"
#include "miaudit/attack.h"
#include "miaudit/out_world.h"

namespace miaudit {
namespace {

class OnlineAdversary {
 public:
  OnlineAdversary(const PopulationPool& pool, OnlineAttackOptions options)
      : pool_(pool), options_(std::move(options)) {}

  absl::StatusOr<AdversaryAnswer> Answer(const AdversaryQuery& query) {
    const Challenge& ch = query.challenge;
    absl::StatusOr<const ThresholdFn*> fn = Calibrated(query);
    if (!fn.ok()) return fn.status();
    absl::StatusOr<AttackDecision> d =
        Decide(**fn, *ch.model, ch.record, query.alpha);
    if (!d.ok()) return d.status();
    return AdversaryAnswer{d->predicted_bit, d->loss, d->threshold};
  }

 private:
  // Slot key: (model id, record id), with unused parts blanked.
  using Key = std::pair<std::string, RecordId>;

  absl::StatusOr<const ThresholdFn*> Calibrated(const AdversaryQuery& query) {
    const Challenge& ch = query.challenge;
    const Dependency dep = DependencyOf(options_.kind);
    Key key{dep.model ? ch.model->id() : std::string(),
            dep.record ? ch.record.id : -1};
    std::lock_guard lock(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second.get();
    absl::StatusOr<ThresholdFn> fn = Build(query, key);
    if (!fn.ok()) return fn.status();
    auto [pos, _] =
        cache_.emplace(key, std::make_unique<ThresholdFn>(*std::move(fn)));
    return pos->second.get();
  }

  absl::StatusOr<ThresholdFn> Build(const AdversaryQuery& query,
                                    const Key& key) {
    const Challenge& ch = query.challenge;
    const SeedSpec seed = options_.seed.Child("model", Fnv1a64(key.first))
                              .Child("record", static_cast<uint64_t>(key.second));
    const RecordId z[] = {ch.record.id};
    switch (options_.kind) {
      case AttackKind::kS: {
        ShadowOptions o{options_.dataset_size, options_.num_models,
                        options_.eval_per_class, options_.train, seed,
                        options_.workers};
        absl::StatusOr<OutWorldSet> set = BuildShadow(pool_, o);
        if (!set.ok()) return set.status();
        return CalibrateS(*set, options_.method);
      }
      case AttackKind::kP: {
        IdSet exclude(ch.model_dataset.record_ids.begin(),
                      ch.model_dataset.record_ids.end());
        exclude.insert(ch.record.id);
        absl::StatusOr<OutWorldSet> set = BuildPopulation(
            *ch.model, pool_, options_.m_per_class, seed, exclude);
        if (!set.ok()) return set.status();
        return CalibrateP(std::span(&*set, 1), options_.method,
                          options_.per_label);
      }
      case AttackKind::kR: {
        ReferenceOptions o{options_.dataset_size, options_.num_models,
                           options_.train, seed, options_.workers};
        absl::StatusOr<OutWorldSet> set = BuildReference(pool_, z, o);
        if (!set.ok()) return set.status();
        return CalibrateR(*set, options_.method);
      }
      case AttackKind::kD: {
        DistilledOptions o{options_.distill_size, options_.num_models,
                           options_.train, seed, options_.workers};
        absl::StatusOr<OutWorldSet> set =
            BuildDistilled(*ch.model, pool_, z, o);
        if (!set.ok()) return set.status();
        return CalibrateD(std::span(&*set, 1), options_.method);
      }
      case AttackKind::kL: {
        if (query.context.known_dataset == nullptr) {
          return absl::FailedPreconditionError(
              "attack L needs the remaining dataset (FixedWorstCase game)");
        }
        LeaveOneOutOptions o{options_.num_models, options_.train, seed,
                             options_.workers};
        absl::StatusOr<OutWorldSet> set = BuildLeaveOneOut(
            pool_, *query.context.known_dataset, ch.record.id, o);
        if (!set.ok()) return set.status();
        set->target_model_id = ch.model->id();
        return CalibrateL(std::span(&*set, 1), options_.method);
      }
    }
    return absl::InternalError("unknown attack kind");
  }

  const PopulationPool& pool_;
  const OnlineAttackOptions options_;
  std::mutex mu_;
  std::map<Key, std::unique_ptr<ThresholdFn>> cache_;
};

}  // namespace

absl::StatusOr<Adversary> MakeOnlineAdversary(const PopulationPool& pool,
                                              OnlineAttackOptions options) {
  if (options.num_models < 1) {
    return absl::InvalidArgumentError("num_models must be >= 1");
  }
  if (options.kind != AttackKind::kP && options.kind != AttackKind::kD &&
      options.kind != AttackKind::kL && options.dataset_size == 0) {
    return absl::InvalidArgumentError("dataset_size must be >= 1");
  }
  if (options.kind == AttackKind::kD && options.distill_size == 0) {
    return absl::InvalidArgumentError("distill_size must be >= 1");
  }
  if (absl::Status s = ValidateTrainConfig(options.train); !s.ok()) return s;
  auto adversary = std::make_shared<OnlineAdversary>(pool, std::move(options));
  return Adversary([adversary](const AdversaryQuery& q) {
    return adversary->Answer(q);
  });
}

}  // namespace miaudit
