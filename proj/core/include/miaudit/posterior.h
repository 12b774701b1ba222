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

#ifndef MIAUDIT_POSTERIOR_H_
#define MIAUDIT_POSTERIOR_H_

#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "miaudit/model.h"
#include "miaudit/population.h"
#include "miaudit/seed.h"

namespace miaudit {

// Sampler settings for the Gibbs posterior
//
//   P(theta | D) ∝ exp(-(1/T) * sum_{z in D} loss(theta, z))
//
// under a uniform prior on the box [-box_radius, box_radius]^p.
struct PosteriorConfig {
  double temperature = 1.0;
  // Standard deviation of the Gaussian random-walk proposal.
  double step_size = 0.25;
  int burn_in = 2000;
  // Steps between returned states; the first state is returned after
  // burn_in + thinning steps.
  int thinning = 1;
  double box_radius = 8.0;
  SeedSpec seed;
};

absl::Status ValidatePosteriorConfig(const PosteriorConfig& config);

// Largest feature dimension the sampler accepts.
inline constexpr int kMaxPosteriorDim = 4;

// The sampler works on logistic-regression models (h = 0) in identifiable
// form: class 0's weight row and bias are pinned to zero, leaving
// (K - 1) * (d + 1) free parameters laid out class by class as
// [w_k (d values), b_k].
int FreeParameterCount(int dim, int classes);
ToyModel LogisticFromFree(int dim, int classes, std::span<const double> free);
std::vector<double> FreeFromLogistic(const ToyModel& model);

// (1/T) * sum of losses of `model` on `dataset`.
double GibbsEnergy(const PopulationPool& pool, const Dataset& dataset,
                   const ToyModel& model, double temperature);

// Random-walk Metropolis: start uniformly in the box (seed/"init"), propose
// theta' = theta + step_size * N(0, I) (seed/"chain"), reject proposals
// outside the box, accept with probability min(1, exp(E(theta) - E(theta'))).
// Returns one state after burn-in and thinning.
absl::StatusOr<ToyModel> PosteriorSample(const PopulationPool& pool,
                                         const Dataset& dataset,
                                         const PosteriorConfig& config);

// Returns `count` states of one chain, `thinning` steps apart, after burn-in.
absl::StatusOr<std::vector<ToyModel>> PosteriorChain(
    const PopulationPool& pool, const Dataset& dataset,
    const PosteriorConfig& config, size_t count);

}  // namespace miaudit

#endif  // MIAUDIT_POSTERIOR_H_
