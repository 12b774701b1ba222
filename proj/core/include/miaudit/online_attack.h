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

#ifndef MIAUDIT_ONLINE_ATTACK_H_
#define MIAUDIT_ONLINE_ATTACK_H_

#include "miaudit/game.h"
#include "miaudit/population.h"
#include "miaudit/seed.h"
#include "miaudit/smoothing.h"
#include "miaudit/threshold_fn.h"
#include "miaudit/trainer.h"

namespace miaudit {

struct OnlineAttackOptions {
  AttackKind kind = AttackKind::kS;
  SmoothingMethod method = SmoothingMethod::kLinearInterp;
  // Training set size of the shadow / reference models.
  size_t dataset_size = 0;
  // Out-world models per calibration.
  int num_models = 20;
  // Attack S: evaluation records per label.
  size_t eval_per_class = 20;
  // Attack P: population records per label.
  size_t m_per_class = 50;
  // Attack D: size of each distillation set.
  size_t distill_size = 0;
  bool per_label = false;
  TrainConfig train;
  SeedSpec seed;
  int workers = 1;
};

// A game adversary that builds the out world its attack kind needs on first
// use and caches it per dependency slot. Attack L requires the
// kFixedWorstCase game, which reveals the remaining dataset.
absl::StatusOr<Adversary> MakeOnlineAdversary(const PopulationPool& pool,
                                              OnlineAttackOptions options);

}  // namespace miaudit

#endif  // MIAUDIT_ONLINE_ATTACK_H_
