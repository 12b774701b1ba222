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


#ifndef MIAUDIT_TOOLS_CONFIG_H_
#define MIAUDIT_TOOLS_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "miaudit/game.h"
#include "miaudit/smoothing.h"
#include "miaudit/threshold_fn.h"
#include "miaudit/trainer.h"

namespace miaudit::cli {

struct PopulationSection {
  int dim = 0;
  int classes = 0;
  size_t pool_size = 0;
  double class_scale = 1.0;
};

struct TrainingSection {
  // Seed is unset; commands derive it.
  TrainConfig train;
  size_t dataset_size = 0;
  int num_targets = 1;
};

struct AttackSection {
  std::vector<AttackKind> kinds;
  std::vector<double> alphas;
  SmoothingMethod method = SmoothingMethod::kLinearInterp;
  int n_shadow = 0;
  int n_reference = 0;
  int n_distilled = 0;
  size_t m_per_class = 0;
  size_t shadow_eval_per_class = 0;
  size_t distill_size = 0;
  size_t distill_epochs = 0;
  // Non-member challenges per target model.
  size_t nonmembers = 0;
};

struct GameSection {
  GameVariant variant = GameVariant::kAverageAll;
  int trials = 0;
  AttackKind adversary = AttackKind::kS;
  int adversary_models = 0;
  double alpha = 0.05;
};

struct Lemma1Section {
  size_t pool_size = 1000;
  double class_scale = 1.0;
  size_t n = 8;
  double temperature = 0.1;
  int trials = 2000;
  int grid_cells = 400;
  int importance_samples = 16;
};

struct ExperimentConfig {
  PopulationSection population;
  TrainingSection training;
  AttackSection attack;
  std::optional<GameSection> game;
  std::optional<Lemma1Section> lemma1;
  uint64_t root_seed = 0;
  std::string output_dir;
  // FNV-1a of the canonical key=value listing, as 16 hex digits.
  std::string hash;
};

// Parses an INI file with [population], [training], [attack] and [seeds]
// sections, and optional [game], [lemma1] and [output] sections. Errors name
// the offending key as "section.key".
absl::StatusOr<ExperimentConfig> ParseConfig(const std::string& text);
absl::StatusOr<ExperimentConfig> LoadConfig(const std::string& path);

// "0.01,0.05" -> {0.01, 0.05}; every value must lie in [0, 1].
absl::StatusOr<std::vector<double>> ParseAlphaList(const std::string& text);

}  // namespace miaudit::cli

#endif  // MIAUDIT_TOOLS_CONFIG_H_
