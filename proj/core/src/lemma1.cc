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

#include "miaudit/lemma1.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "miaudit/game.h"
#include "miaudit/model.h"
#include "miaudit/parallel.h"
#include "miaudit/random.h"

namespace miaudit {
namespace {

constexpr double kSelfTestTolerance = 1e-3;
constexpr size_t kMaxPoolSize = 62;

// Cross-entropy of the pinned logistic model with class-1 logit u, clamped
// like ToyModel::Loss.
double PinnedLoss(double u, int label) {
  const double max_loss = -std::log(kProbabilityFloor);
  // -log sigmoid(v) = softplus(-v).
  const double v = label == 1 ? u : -u;
  const double softplus =
      v > 0 ? std::log1p(std::exp(-v)) : -v + std::log1p(std::exp(v));
  return std::min(softplus, max_loss);
}

double LogSumExp(std::span<const double> v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

struct Grid {
  int cells = 0;
  double radius = 0.0;
  double width() const { return 2.0 * radius / cells; }
  double center(int i) const { return -radius + (i + 0.5) * width(); }
  size_t size() const { return static_cast<size_t>(cells) * cells; }
};

// Log posterior weights -loss_r(theta_c) / T of every pool record on every
// grid cell, stored as floats to bound memory for large pools.
class GridWeights {
 public:
  GridWeights(const PopulationPool& pool, const Grid& grid, double temperature)
      : grid_(grid), cells_(grid.size()), w_(pool.size() * grid.size()) {
    for (size_t r = 0; r < pool.size(); ++r) {
      const Record& rec = pool.records[r];
      float* row = &w_[r * cells_];
      for (int i = 0; i < grid.cells; ++i) {
        const double w = grid.center(i);
        for (int j = 0; j < grid.cells; ++j) {
          row[static_cast<size_t>(i) * grid.cells + j] = static_cast<float>(
              -PinnedLoss(w * rec.features[0] + grid.center(j), rec.label) /
              temperature);
        }
      }
    }
  }

  // log Z(D) = log of h^2 * sum over cells of exp(sum_{r in D} w_r).
  double LogZ(std::span<const size_t> members,
              std::vector<double>& scratch) const {
    scratch.assign(cells_, 0.0);
    for (size_t r : members) {
      const float* row = &w_[r * cells_];
      for (size_t c = 0; c < cells_; ++c) scratch[c] += row[c];
    }
    double m = -std::numeric_limits<double>::infinity();
    for (double x : scratch) m = std::max(m, x);
    // Cells more than kCutoff nats below the peak add < 1e-12 in total.
    const double floor = m - kCutoff;
    double s = 0.0;
    for (double x : scratch) {
      if (x > floor) s += std::exp(x - m);
    }
    return m + std::log(s) + 2.0 * std::log(grid_.width());
  }

 private:
  static constexpr double kCutoff = 40.0;
  Grid grid_;
  size_t cells_;
  std::vector<float> w_;
};

// log Z(D) on `grid` in double precision, losses computed on the fly.
double LogPartitionDirect(const PopulationPool& pool,
                          std::span<const size_t> members, const Grid& grid,
                          double temperature) {
  std::vector<double> terms(grid.size());
  for (int i = 0; i < grid.cells; ++i) {
    const double w = grid.center(i);
    for (int j = 0; j < grid.cells; ++j) {
      double s = 0.0;
      for (size_t r : members) {
        const Record& rec = pool.records[r];
        s += PinnedLoss(w * rec.features[0] + grid.center(j), rec.label);
      }
      terms[static_cast<size_t>(i) * grid.cells + j] = -s / temperature;
    }
  }
  return LogSumExp(terms) + 2.0 * std::log(grid.width());
}

double LogAddExp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return std::max(a, b) + std::log1p(std::exp(-std::abs(a - b)));
}

// suffix[i][j] = log e_j(a_i, ..., a_{m-1}) for log_a of length m.
std::vector<std::vector<double>> LogEspSuffix(std::span<const double> log_a,
                                              size_t k) {
  const size_t m = log_a.size();
  const double ninf = -std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> suf(m + 1, std::vector<double>(k + 1, ninf));
  suf[m][0] = 0.0;
  for (size_t i = m; i-- > 0;) {
    suf[i][0] = 0.0;
    for (size_t j = 1; j <= k; ++j) {
      suf[i][j] = LogAddExp(suf[i + 1][j], log_a[i] + suf[i + 1][j - 1]);
    }
  }
  return suf;
}

// Draws a k-subset (indices into log_a) with probability proportional to
// the product of its a_i.
std::vector<size_t> SampleWeightedSubset(
    std::span<const double> log_a,
    const std::vector<std::vector<double>>& suf, size_t k, Rng& rng) {
  std::vector<size_t> out;
  size_t j = k;
  for (size_t i = 0; i < log_a.size() && j > 0; ++i) {
    const double p = std::exp(log_a[i] + suf[i + 1][j - 1] - suf[i][j]);
    if (rng.Uniform() < p) {
      out.push_back(i);
      --j;
    }
  }
  return out;
}

std::vector<uint64_t> Subsets(size_t n, size_t k) {
  std::vector<uint64_t> out;
  if (k == 0) return {0};
  // Gosper's hack over n-bit masks.
  uint64_t mask = (uint64_t{1} << k) - 1;
  const uint64_t limit = uint64_t{1} << n;
  while (mask < limit) {
    out.push_back(mask);
    const uint64_t c = mask & -mask;
    const uint64_t r = mask + c;
    mask = (((r ^ mask) >> 2) / c) | r;
  }
  return out;
}

double Binomial(size_t n, size_t k) {
  double b = 1.0;
  for (size_t i = 1; i <= k; ++i) b = b * static_cast<double>(n - k + i) / i;
  return b;
}

}  // namespace

absl::StatusOr<Lemma1Result> Lemma1Experiment(const PopulationPool& pool,
                                              const Lemma1Options& options) {
  if (pool.dim != 1 || pool.num_classes != 2) {
    return absl::InvalidArgumentError(
        "the likelihood-ratio oracle needs d = 1 and K = 2");
  }
  const size_t n = options.n;
  if (n < 1 || n > 16) {
    return absl::InvalidArgumentError("n must lie in [1, 16]");
  }
  const size_t N = pool.size();
  if (N <= n) {
    return absl::InvalidArgumentError(
        absl::StrCat("pool size ", N, " must exceed n = ", n));
  }
  if (!(options.temperature > 0.0)) {
    return absl::InvalidArgumentError("temperature must be > 0");
  }
  if (options.trials < 1) {
    return absl::InvalidArgumentError("trials must be >= 1");
  }
  if (options.grid_cells < 400) {
    return absl::InvalidArgumentError("grid_cells must be >= 400");
  }
  if (options.importance_samples < 1) {
    return absl::InvalidArgumentError("importance_samples must be >= 1");
  }
  PosteriorConfig sampler = options.sampler;
  sampler.temperature = options.temperature;
  if (absl::Status s = ValidatePosteriorConfig(sampler); !s.ok()) return s;
  const Grid grid{options.grid_cells, sampler.box_radius};
  const double T = options.temperature;

  Lemma1Result result;
  result.enumerated = N <= kMaxPoolSize &&
                      Binomial(N, n) <= static_cast<double>(options.max_datasets);

  // Posterior mass of the grid, integrated on a 2x refined grid, for
  // uniformly drawn datasets.
  const Grid fine{2 * grid.cells, grid.radius};
  for (int k = 0; k < options.self_test_datasets; ++k) {
    absl::StatusOr<std::vector<RecordId>> ids = SampleIds(
        pool, n, options.seed.Child("self_test", static_cast<uint64_t>(k)));
    if (!ids.ok()) return ids.status();
    std::vector<size_t> members(ids->begin(), ids->end());
    const double coarse = LogPartitionDirect(pool, members, grid, T);
    const double refined = LogPartitionDirect(pool, members, fine, T);
    result.self_test_deviation =
        std::max(result.self_test_deviation,
                 std::abs(std::exp(refined - coarse) - 1.0));
  }
  if (!(result.self_test_deviation <= kSelfTestTolerance)) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "grid resolution insufficient: posterior mass deviates from 1 by %g",
        result.self_test_deviation));
  }

  const GridWeights weights(pool, grid, T);
  // Enumeration: every n-subset and its log Z.
  std::vector<uint64_t> datasets;
  std::vector<double> log_z;
  if (result.enumerated) {
    datasets = Subsets(N, n);
    log_z.resize(datasets.size());
    absl::Status status =
        ParallelFor(datasets.size(), options.workers, [&](size_t i) {
          thread_local std::vector<double> scratch;
          std::vector<size_t> members;
          for (size_t r = 0; r < N; ++r) {
            if (datasets[i] >> r & 1) members.push_back(r);
          }
          log_z[i] = weights.LogZ(members, scratch);
          return absl::OkStatus();
        });
    if (!status.ok()) return status;
  }

  GameSpec spec;
  spec.variant = GameVariant::kAverageAll;
  spec.n = n;
  spec.trials = options.trials;
  spec.root_seed = options.seed.Child("game");
  spec.workers = options.workers;
  Adversary by_loss =
      [](const AdversaryQuery& q) -> absl::StatusOr<AdversaryAnswer> {
    AdversaryAnswer a;
    a.loss = q.challenge.model->Loss(q.challenge.record);
    return a;
  };
  absl::StatusOr<Transcript> transcript =
      Play(pool, spec, PosteriorAlgorithm(pool, sampler), by_loss);
  if (!transcript.ok()) return transcript.status();

  const size_t trials = transcript->trials.size();
  result.truths.resize(trials);
  result.loss_scores.resize(trials);
  result.oracle_scores.resize(trials);
  // P(theta, z | member) / P(theta, z | non-member) carries the weights
  // 1/n and 1/(N - n) of drawing z from inside or outside D.
  const double log_prior_ratio = std::log(static_cast<double>(N - n)) -
                                 std::log(static_cast<double>(n));
  absl::Status status = ParallelFor(trials, options.workers, [&](size_t t) {
    thread_local std::vector<double> scratch;
    const TrialRecord& tr = transcript->trials[t];
    const ToyModel& model = *tr.challenge.model;
    const auto z = static_cast<size_t>(tr.challenge.record.id);
    std::vector<double> log_a(N);
    for (size_t r = 0; r < N; ++r) log_a[r] = -model.Loss(pool.records[r]) / T;
    double log_with = 0.0, log_without = 0.0;
    if (result.enumerated) {
      std::vector<double> with_z, without_z;
      for (size_t i = 0; i < datasets.size(); ++i) {
        double s = 0.0;
        for (size_t r = 0; r < N; ++r) {
          if (datasets[i] >> r & 1) s += log_a[r];
        }
        (datasets[i] >> z & 1 ? with_z : without_z).push_back(s - log_z[i]);
      }
      log_with = LogSumExp(with_z);
      log_without = LogSumExp(without_z);
    } else {
      // Records other than z, and their weights.
      std::vector<size_t> others;
      std::vector<double> log_b;
      for (size_t r = 0; r < N; ++r) {
        if (r == z) continue;
        others.push_back(r);
        log_b.push_back(log_a[r]);
      }
      const auto suf = LogEspSuffix(log_b, n - 1);
      const double log_b_max = *std::max_element(log_b.begin(), log_b.end());
      std::vector<double> b(log_b.size());
      for (size_t i = 0; i < b.size(); ++i) b[i] = std::exp(log_b[i] - log_b_max);
      // Paired draws: D' ~ prod(a) over (n-1)-subsets of the other records,
      // then r ~ a over the rest. D' + z feeds the member sum; D' + r feeds
      // the non-member sum, reweighted by 1 / (sum_{s in D} a_s / rest_s),
      // rest_s = a-mass outside D minus s.
      Rng rng(options.seed.Child("oracle", t));
      std::vector<double> with_terms, without_terms;
      std::vector<char> in_d(b.size());
      for (int s = 0; s < options.importance_samples; ++s) {
        const std::vector<size_t> picked =
            SampleWeightedSubset(log_b, suf, n - 1, rng);
        std::fill(in_d.begin(), in_d.end(), 0);
        for (size_t i : picked) in_d[i] = 1;
        double outside = 0.0;
        for (size_t i = 0; i < b.size(); ++i) {
          if (!in_d[i]) outside += b[i];
        }
        double u = rng.Uniform() * outside;
        size_t extra = b.size();
        for (size_t i = 0; i < b.size(); ++i) {
          if (in_d[i]) continue;
          extra = i;
          u -= b[i];
          if (u < 0.0) break;
        }
        std::vector<size_t> members;
        for (size_t i : picked) members.push_back(others[i]);
        members.push_back(z);
        with_terms.push_back(-weights.LogZ(members, scratch));
        members.back() = others[extra];
        const double rest = outside - b[extra];
        double inv = 0.0;
        for (size_t i : picked) inv += 1.0 / (rest + b[i]);
        inv += 1.0 / (rest + b[extra]);
        without_terms.push_back(-weights.LogZ(members, scratch) -
                                std::log(inv) + log_b_max);
      }
      // Shared factor e_{n-1} and the sample count cancel in the ratio.
      log_with = log_a[z] + LogSumExp(with_terms);
      log_without = LogSumExp(without_terms);
    }
    result.oracle_scores[t] = log_with - log_without + log_prior_ratio;
    result.loss_scores[t] = -tr.answer.loss;
    result.truths[t] = tr.challenge.secret_bit;
    return absl::OkStatus();
  });
  if (!status.ok()) return status;

  absl::StatusOr<RocCurve> a = RocScoreSweep(result.loss_scores, result.truths);
  if (!a.ok()) return a.status();
  absl::StatusOr<RocCurve> b =
      RocScoreSweep(result.oracle_scores, result.truths);
  if (!b.ok()) return b.status();
  result.loss_threshold = *std::move(a);
  result.bayes_oracle = *std::move(b);
  result.auc_loss_threshold = result.loss_threshold.auc;
  result.auc_bayes_oracle = result.bayes_oracle.auc;
  result.gap = result.auc_bayes_oracle - result.auc_loss_threshold;
  return result;
}

}  // namespace miaudit
