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


#ifndef MIAUDIT_TOOLS_COMMANDS_H_
#define MIAUDIT_TOOLS_COMMANDS_H_

#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "config.h"
#include "miaudit/smoothing.h"

namespace miaudit::cli {

struct RunOptions {
  // Overrides the config's [output] dir when non-empty.
  std::string out_dir;
  int workers = 1;
  std::optional<std::vector<double>> alphas;
  std::optional<SmoothingMethod> method;
};

// Applies the overrides of `options` to `config`, folding them into the
// config hash so that output headers identify the effective settings.
absl::StatusOr<ExperimentConfig> ResolveConfig(ExperimentConfig config,
                                               const RunOptions& options);

// Each command reads its upstream artifacts from config.output_dir and
// writes its own. Every file except the signal CSVs starts with
// "# config_hash=<hash>"; signal CSVs keep the exact signal schema and are
// listed with the hash in signals/manifest.csv.
absl::Status CmdSynth(const ExperimentConfig& config, int workers);
absl::Status CmdTrain(const ExperimentConfig& config, int workers);
absl::Status CmdSignals(const ExperimentConfig& config, int workers);
absl::Status CmdAttack(const ExperimentConfig& config, int workers);
absl::Status CmdEval(const ExperimentConfig& config, int workers);
absl::Status CmdGame(const ExperimentConfig& config, int workers);
absl::Status CmdLemma1(const ExperimentConfig& config, int workers);
// synth, train, signals, attack, eval, then game and lemma1 when their
// sections are present.
absl::Status CmdPipeline(const ExperimentConfig& config, int workers);

}  // namespace miaudit::cli

#endif  // MIAUDIT_TOOLS_COMMANDS_H_
