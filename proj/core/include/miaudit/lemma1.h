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

#ifndef MIAUDIT_LEMMA1_H_
#define MIAUDIT_LEMMA1_H_

#include <vector>

#include "absl/status/statusor.h"
#include "miaudit/population.h"
#include "miaudit/posterior.h"
#include "miaudit/roc.h"
#include "miaudit/seed.h"

namespace miaudit {

struct Lemma1Options {
  // Training set size (<= 16).
  size_t n = 8;
  double temperature = 0.1;
  int trials = 2000;
  // Sampler settings; temperature and seed are overridden.
  PosteriorConfig sampler;
  // Oracle grid cells per parameter (>= 400).
  int grid_cells = 400;
  // Pools with at most this many n-subsets are summed over exactly;
  // larger pools use importance sampling (see below).
  size_t max_datasets = 20000;
  // Paired draws per trial for large pools.
  int importance_samples = 16;
  // Datasets whose posterior mass is checked against a 2x refined grid.
  int self_test_datasets = 8;
  SeedSpec seed;
  int workers = 1;
};

struct Lemma1Result {
  // AverageAll game, score = -loss.
  RocCurve loss_threshold;
  // Same trials, score = log of the exact likelihood ratio.
  RocCurve bayes_oracle;
  double auc_loss_threshold = 0.0;
  double auc_bayes_oracle = 0.0;
  // auc_bayes_oracle - auc_loss_threshold.
  double gap = 0.0;
  // max |integral of the grid posterior - 1| over the checked datasets.
  double self_test_deviation = 0.0;
  // Whether every dataset was enumerated.
  bool enumerated = false;
  std::vector<int> truths;
  std::vector<double> loss_scores;
  std::vector<double> oracle_scores;
};

// Plays the AverageAll game with posterior-sampled logistic models
// (h = 0, d = 1, K = 2) and scores each trial both by the loss-threshold
// statistic and by the exact likelihood ratio
//
//   LR = (1/n) sum_{D containing z} P(theta | D)
//        / (1/(N-n)) sum_{D not containing z} P(theta | D),
//
// summing over every n-subset D of the N-record pool, with each posterior
// normalized by a midpoint-rule grid integral over the sampler's box.
//
// Writing a_r = exp(-loss(theta, r) / T), the member sum equals
//   a_z * e_{n-1}(a) * E[1 / Z(D' + z)],
// with D' drawn from (n-1)-subsets of the other records with probability
// proportional to prod_{r in D'} a_r and e_k the elementary symmetric
// polynomial. Small pools enumerate every D. Larger pools draw D' and
// complete it with one more record r ~ a_r; the non-member sum is estimated
// from the same draws, weighted by the exact probability of the completed
// set, so both sums share their Monte Carlo error.
// Fails if the grid's posterior mass deviates from 1 by more than 1e-3
// under a 2x refined grid.
absl::StatusOr<Lemma1Result> Lemma1Experiment(const PopulationPool& pool,
                                              const Lemma1Options& options);

}  // namespace miaudit

#endif  // MIAUDIT_LEMMA1_H_
