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


// Command-line front end: miaudit <command> --config <path> [flags].

#include <cstdio>
#include <functional>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "commands.h"
#include "config.h"

namespace {

using Command = std::function<absl::Status(
    const miaudit::cli::ExperimentConfig&, int)>;

int Run(const Command& command, const std::string& config_path,
        const miaudit::cli::RunOptions& options) {
  absl::StatusOr<miaudit::cli::ExperimentConfig> config =
      miaudit::cli::LoadConfig(config_path);
  if (config.ok()) config = miaudit::cli::ResolveConfig(*config, options);
  absl::Status status =
      config.ok() ? command(*config, options.workers) : config.status();
  if (!status.ok()) {
    std::fprintf(stderr, "miaudit: %s\n", std::string(status.message()).c_str());
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Membership inference auditing toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string alphas;
  std::string method;
  miaudit::cli::RunOptions options;

  const std::map<std::string, std::pair<Command, std::string>> commands = {
      {"synth", {miaudit::cli::CmdSynth, "Generate the population pool"}},
      {"train", {miaudit::cli::CmdTrain, "Train the target models"}},
      {"signals", {miaudit::cli::CmdSignals, "Build out-world signal files"}},
      {"attack", {miaudit::cli::CmdAttack, "Emit attack decisions"}},
      {"eval", {miaudit::cli::CmdEval, "ROC curves, tables and summary"}},
      {"game", {miaudit::cli::CmdGame, "Play the configured inference game"}},
      {"lemma1", {miaudit::cli::CmdLemma1, "Loss threshold vs LRT oracle"}},
      {"pipeline", {miaudit::cli::CmdPipeline, "Run every stage in order"}},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, entry] : commands) {
    CLI::App* sub = app.add_subcommand(name, entry.second);
    sub->add_option("--config", config_path, "Experiment config (INI)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", options.out_dir, "Output directory");
    sub->add_option("--workers", options.workers, "Worker threads")
        ->check(CLI::PositiveNumber);
    sub->add_option("--alpha", alphas, "Comma-separated FPR levels");
    sub->add_option("--method", method, "linear, logit, min or avg");
    subs[name] = sub;
  }
  CLI11_PARSE(app, argc, argv);

  if (!alphas.empty()) {
    absl::StatusOr<std::vector<double>> parsed =
        miaudit::cli::ParseAlphaList(alphas);
    if (!parsed.ok()) {
      std::fprintf(stderr, "miaudit: --alpha: %s\n",
                   std::string(parsed.status().message()).c_str());
      return 2;
    }
    options.alphas = *parsed;
  }
  if (!method.empty()) {
    absl::StatusOr<miaudit::SmoothingMethod> parsed =
        miaudit::ParseSmoothingMethod(method);
    if (!parsed.ok()) {
      std::fprintf(stderr, "miaudit: --method: %s\n",
                   std::string(parsed.status().message()).c_str());
      return 2;
    }
    options.method = *parsed;
  }
  for (const auto& [name, sub] : subs) {
    if (sub->parsed()) return Run(commands.at(name).first, config_path, options);
  }
  return 2;
}
