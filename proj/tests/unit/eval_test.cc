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


#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "miaudit/analysis.h"
#include "miaudit/lemma1.h"
#include "miaudit/out_world.h"
#include "miaudit/population.h"
#include "miaudit/random.h"
#include "miaudit/roc.h"
#include "miaudit/threshold_fn.h"
#include "miaudit/trainer.h"
#include "test_util.h"

namespace miaudit {
namespace {

using ::miaudit::testing::MessageOf;
using ::miaudit::testing::Unwrap;
using ::testing::HasSubstr;

// O(n^2) Mann-Whitney statistic with ties counting one half.
double PairwiseAuc(const std::vector<double>& scores,
                   const std::vector<int>& truths) {
  double wins = 0.0;
  double pairs = 0.0;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (truths[i] != 1) continue;
    for (size_t j = 0; j < scores.size(); ++j) {
      if (truths[j] != 0) continue;
      pairs += 1.0;
      if (scores[i] > scores[j]) {
        wins += 1.0;
      } else if (scores[i] == scores[j]) {
        wins += 0.5;
      }
    }
  }
  return wins / pairs;
}

ThresholdFn UniformReferenceFn(Rng& rng, RecordId record, int samples) {
  OutWorldSet s;
  s.kind = SignalKind::kReference;
  std::vector<std::string> models;
  for (int i = 0; i < samples; ++i) models.push_back("r" + std::to_string(i));
  s.matrix = SignalMatrix::Zeros(models, {record});
  for (double& v : s.matrix.values) v = rng.Uniform();
  return Unwrap(CalibrateR(s, SmoothingMethod::kLinearInterp));
}

TEST(RocAlphaSweepTest, PerfectSeparation) {
  Rng rng(SeedSpec(1));
  ThresholdFn fn = UniformReferenceFn(rng, 0, 200);
  std::vector<ScoredTarget> targets;
  std::vector<int> truths;
  for (int i = 0; i < 50; ++i) {
    targets.push_back({{"m", 0, 0}, 0.0});
    truths.push_back(1);
    targets.push_back({{"m", 0, 0}, 5.0});
    truths.push_back(0);
  }
  RocCurve c = Unwrap(RocAlphaSweep(fn, targets, truths, DefaultAlphaGrid()));
  EXPECT_DOUBLE_EQ(c.auc, 1.0);
  EXPECT_EQ(c.source, RocSource::kAlphaSweep);
}

TEST(RocAlphaSweepTest, CoinAttackIsAtChance) {
  Rng rng(SeedSpec(2));
  ThresholdFn fn = UniformReferenceFn(rng, 0, 1000);
  std::vector<ScoredTarget> targets;
  std::vector<int> truths;
  for (int i = 0; i < 2000; ++i) {
    targets.push_back({{"m", 0, 0}, rng.Uniform()});
    truths.push_back(rng.Bernoulli(0.5) ? 1 : 0);
  }
  RocCurve c = Unwrap(RocAlphaSweep(fn, targets, truths, DefaultAlphaGrid()));
  EXPECT_NEAR(c.auc, 0.5, 0.04);
  for (size_t i = 1; i < c.points.size(); ++i) {
    EXPECT_GE(c.points[i].fpr, c.points[i - 1].fpr);
    EXPECT_GE(c.points[i].tpr, c.points[i - 1].tpr);
  }
}

TEST(RocAlphaSweepTest, DegenerateGrid) {
  Rng rng(SeedSpec(3));
  ThresholdFn fn = UniformReferenceFn(rng, 0, 10);
  std::vector<ScoredTarget> targets = {{{"m", 0, 0}, 0.1}, {{"m", 0, 0}, 0.9}};
  std::vector<int> truths = {1, 0};
  const std::vector<double> grid = {0.0, 1.0};
  RocCurve c = Unwrap(RocAlphaSweep(fn, targets, truths, grid));
  EXPECT_EQ(c.points, (std::vector<RocPoint>{{0, 0}, {1, 1}}));
  EXPECT_DOUBLE_EQ(c.auc, 0.5);
}

TEST(RocAlphaSweepTest, SingleClassIsError) {
  Rng rng(SeedSpec(4));
  ThresholdFn fn = UniformReferenceFn(rng, 0, 10);
  std::vector<ScoredTarget> targets = {{{"m", 0, 0}, 0.1}};
  std::vector<int> truths = {1};
  EXPECT_FALSE(RocAlphaSweep(fn, targets, truths, DefaultAlphaGrid()).ok());
}

TEST(DefaultAlphaGridTest, Shape) {
  const std::vector<double> g = DefaultAlphaGrid();
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g.back(), 1.0);
  EXPECT_TRUE(std::is_sorted(g.begin(), g.end()));
  EXPECT_NE(std::find_if(g.begin(), g.end(),
                         [](double a) { return std::abs(a - 1e-4) < 1e-15; }),
            g.end());
  EXPECT_NE(std::find_if(g.begin(), g.end(),
                         [](double a) { return std::abs(a - 0.35) < 1e-12; }),
            g.end());
}

TEST(RocScoreSweepTest, Examples) {
  RocCurve c =
      Unwrap(RocScoreSweep(std::vector<double>{0.9, 0.8, 0.1, 0.2},
                           std::vector<int>{1, 1, 0, 0}));
  EXPECT_DOUBLE_EQ(c.auc, 1.0);
  RocCurve flat = Unwrap(RocScoreSweep(std::vector<double>(6, 0.3),
                                       std::vector<int>{1, 0, 1, 0, 1, 0}));
  EXPECT_DOUBLE_EQ(flat.auc, 0.5);
  EXPECT_FALSE(RocScoreSweep(std::vector<double>{1, 2},
                             std::vector<int>{1, 1}).ok());
}

TEST(RocScoreSweepTest, MatchesPairwiseOracle) {
  Rng rng(SeedSpec(5));
  for (int t = 0; t < 200; ++t) {
    const size_t n = 2 + rng.UniformBelow(499);
    std::vector<double> scores(n);
    std::vector<int> truths(n);
    for (size_t i = 0; i < n; ++i) {
      scores[i] = static_cast<double>(rng.UniformBelow(20));
      truths[i] = rng.Bernoulli(0.4) ? 1 : 0;
    }
    truths[0] = 1;
    truths[1] = 0;
    RocCurve c = Unwrap(RocScoreSweep(scores, truths));
    EXPECT_NEAR(c.auc, PairwiseAuc(scores, truths), 1e-9);
    EXPECT_NEAR(c.auc, TrapezoidAuc(c.points), 1e-12);
    EXPECT_EQ(c.points.front(), (RocPoint{0, 0}));
    EXPECT_EQ(c.points.back(), (RocPoint{1, 1}));
  }
}

TEST(RocInterpolationTest, Examples) {
  RocCurve diag{{{0, 0}, {1, 1}}, 0.5};
  EXPECT_DOUBLE_EQ(TprAtFpr(diag, 0.3), 0.3);
  RocCurve perfect{{{0, 0}, {0, 1}, {1, 1}}, 1.0};
  EXPECT_DOUBLE_EQ(TprAtFpr(perfect, 0.0), 1.0);
  RocCurve three{{{0, 0}, {0.2, 0.6}, {1, 1}}, 0.0};
  EXPECT_DOUBLE_EQ(TprAtFpr(three, 0.1), 0.3);
  EXPECT_DOUBLE_EQ(TprAtFpr(three, 0.6), 0.8);
  EXPECT_DOUBLE_EQ(FprAtTpr(three, 0.8), 0.6);
  EXPECT_DOUBLE_EQ(FprAtTpr(three, 0.3), 0.1);
}

TEST(RocCsvTest, Layout) {
  RocCurve c{{{0, 0}, {0.5, 1}, {1, 1}}, 0.75};
  EXPECT_EQ(RocCsv(c), "fpr,tpr,auc\n0,0,0.75\n0.5,1,0.75\n1,1,0.75\n");
}

TEST(AgreementTest, Examples) {
  EXPECT_EQ(Unwrap(Agreement(std::vector<int>{1, 0, 1},
                             std::vector<int>{1, 0, 1})), 1.0);
  EXPECT_EQ(Unwrap(Agreement(std::vector<int>{1, 0}, std::vector<int>{0, 1})),
            0.0);
  EXPECT_EQ(Unwrap(Agreement(std::vector<int>{1, 1, 0, 0},
                             std::vector<int>{1, 0, 0, 1})), 0.5);
  EXPECT_FALSE(
      Agreement(std::vector<int>{1}, std::vector<int>{1, 0}).ok());
}

TEST(AgreementTableTest, SymmetricWithUnitDiagonal) {
  Rng rng(SeedSpec(6));
  std::vector<std::vector<int>> preds(4, std::vector<int>(50));
  for (auto& p : preds) {
    for (int& b : p) b = rng.Bernoulli(0.5) ? 1 : 0;
  }
  AgreementTable t = Unwrap(
      ComputeAgreementTable({"S", "P", "R", "GT"}, preds, "train"));
  for (size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(t.rates[i][i], 1.0);
    for (size_t j = 0; j < 4; ++j) EXPECT_EQ(t.rates[i][j], t.rates[j][i]);
  }
  EXPECT_THAT(AgreementCsv(t), HasSubstr("S,P,R,GT"));
}

PartitionInput Uniform(size_t records, size_t models, int s, int p, int r) {
  PartitionInput in;
  for (size_t j = 0; j < records; ++j) in.record_ids.push_back(j);
  in.predictions[AttackKind::kS] =
      std::vector<std::vector<int>>(models, std::vector<int>(records, s));
  in.predictions[AttackKind::kP] =
      std::vector<std::vector<int>>(models, std::vector<int>(records, p));
  in.predictions[AttackKind::kR] =
      std::vector<std::vector<int>>(models, std::vector<int>(records, r));
  return in;
}

TEST(PartitionTest, Examples) {
  PartitionOptions o;
  o.baseline_size = 2;
  VulnPartition all = Unwrap(PartitionRecords(Uniform(3, 5, 1, 1, 1), o));
  EXPECT_EQ(all.all_correct.size(), 3u);
  EXPECT_TRUE(all.r_correct.empty());
  VulnPartition r = Unwrap(PartitionRecords(Uniform(3, 5, 0, 0, 1), o));
  EXPECT_EQ(r.r_correct.size(), 3u);
  VulnPartition sp = Unwrap(PartitionRecords(Uniform(3, 5, 1, 1, 0), o));
  EXPECT_EQ(sp.sp_correct.size(), 3u);
  EXPECT_EQ(sp.random_baseline.size(), 2u);
  EXPECT_FALSE(PartitionRecords(Uniform(3, 0, 1, 1, 1), o).ok());
}

TEST(PartitionTest, SetsAreDisjointOnRandomInputs) {
  Rng rng(SeedSpec(7));
  for (int t = 0; t < 200; ++t) {
    const size_t records = 1 + rng.UniformBelow(30);
    const size_t models = 2 + rng.UniformBelow(10);
    PartitionInput in = Uniform(records, models, 0, 0, 0);
    for (auto& [kind, rows] : in.predictions) {
      const double bias = rng.Uniform();
      for (auto& row : rows) {
        for (int& b : row) b = rng.Bernoulli(bias) ? 1 : 0;
      }
    }
    PartitionOptions o;
    o.majority = 0.51 + 0.49 * rng.Uniform();
    o.seed = SeedSpec(t);
    VulnPartition v = Unwrap(PartitionRecords(in, o));
    std::set<RecordId> seen;
    for (const auto* set : {&v.all_correct, &v.r_correct, &v.sp_correct}) {
      for (RecordId id : *set) EXPECT_TRUE(seen.insert(id).second);
    }
  }
}

TrainConfig LooConfig() {
  TrainConfig c;
  c.hidden_width = 4;
  c.epochs = 30;
  c.batch_size = 8;
  c.learning_rate = 0.2;
  return c;
}

TEST(LooVulnerabilityTest, NoLearningIsIndistinguishable) {
  PopulationPool pool = Unwrap(GenPopulation(2, 2, 300, 1.0, SeedSpec(8)));
  Dataset d = Unwrap(SampleDataset(pool, 30, WithoutReplacement{}, SeedSpec(9)));
  LooVulnOptions o;
  o.num_models = 50;
  o.train = LooConfig();
  o.train.learning_rate = 0.0;
  o.seed = SeedSpec(10);
  LooVulnResult r = Unwrap(LooVulnerability(pool, d, d.record_ids[0], o));
  // Null AUC standard deviation at 50 / 50 is about 0.058.
  EXPECT_NEAR(r.score_sweep.auc, 0.5, 0.17);
  EXPECT_EQ(r.with_models.matrix.rows(), 50u);
  EXPECT_EQ(r.without_models.matrix.rows(), 50u);
}

TEST(LooVulnerabilityTest, DuplicatedRecordStaysPresent) {
  PopulationPool pool = Unwrap(GenPopulation(2, 2, 300, 1.0, SeedSpec(11)));
  Dataset d = Unwrap(SampleDataset(pool, 30, WithoutReplacement{}, SeedSpec(12)));
  const RecordId target = d.record_ids[0];
  LooVulnOptions o;
  o.num_models = 30;
  o.train = LooConfig();
  o.seed = SeedSpec(13);
  // Control: the lone record is exposed by its removal.
  const double lone_auc =
      Unwrap(LooVulnerability(pool, d, target, o)).score_sweep.auc;
  EXPECT_GT(lone_auc, 0.9);
  // Ten further copies keep it in the training set after removal.
  PopulationPool dup = pool;
  for (int i = 1; i <= 10; ++i) {
    Record& r = dup.records[d.record_ids[i]];
    r.features = dup.records[target].features;
    r.label = dup.records[target].label;
  }
  const double dup_auc =
      Unwrap(LooVulnerability(dup, d, target, o)).score_sweep.auc;
  // Null AUC standard deviation at 30 / 30 is about 0.075.
  EXPECT_NEAR(dup_auc, 0.5, 0.2);
}

TEST(LooVulnerabilityTest, DeterministicAndRequiresMember) {
  PopulationPool pool = Unwrap(GenPopulation(2, 2, 300, 1.0, SeedSpec(14)));
  Dataset d = Unwrap(SampleDataset(pool, 30, WithoutReplacement{}, SeedSpec(15)));
  LooVulnOptions o;
  o.num_models = 5;
  o.train = LooConfig();
  o.seed = SeedSpec(16);
  LooVulnResult a = Unwrap(LooVulnerability(pool, d, d.record_ids[2], o));
  LooVulnResult b = Unwrap(LooVulnerability(pool, d, d.record_ids[2], o));
  EXPECT_EQ(a.with_models.matrix, b.with_models.matrix);
  EXPECT_EQ(a.alpha_sweep.points, b.alpha_sweep.points);
  RecordId outside = 0;
  while (d.Contains(outside)) ++outside;
  EXPECT_FALSE(LooVulnerability(pool, d, outside, o).ok());
}

TEST(LossHistogramTest, Examples) {
  SignalMatrix m = SignalMatrix::Zeros({"a", "b"}, {1, 2, 3, 4});
  m.values = {0.1, 0.2, 1.1, 1.2, 0.3, 0.4, 1.3, 1.4};
  const std::vector<RecordId> one = {1};
  SignalMatrix single = SignalMatrix::Zeros({"a"}, {1});
  single.values = {0.5};
  EXPECT_EQ(Unwrap(LossHistogram(single, one)).size(), 1u);
  const std::vector<RecordId> low = {1, 2};
  const std::vector<RecordId> high = {3, 4};
  EmpiricalDist lo = Unwrap(LossHistogram(m, low));
  EmpiricalDist hi = Unwrap(LossHistogram(m, high));
  EXPECT_NEAR(lo.mean(), (0.1 + 0.2 + 0.3 + 0.4) / 4, 1e-12);
  EXPECT_NEAR(hi.mean() - lo.mean(), 1.0, 1e-12);
  EXPECT_FALSE(LossHistogram(m, {}).ok());
  const std::string csv = HistogramCsv({"low", "high"}, {lo, hi}, 4);
  EXPECT_THAT(csv, HasSubstr("set,bin_lo,bin_hi,count\n"));
}

double BruteCosine(const std::vector<double>& u, const std::vector<double>& v) {
  double dot = 0, nu = 0, nv = 0;
  for (size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0 || nv == 0) return std::numeric_limits<double>::infinity();
  return 1.0 - dot / (std::sqrt(nu) * std::sqrt(nv));
}

TEST(LatentNeighborsTest, IdenticalCandidateRanksFirst) {
  PopulationPool pool = Unwrap(GenPopulation(3, 2, 50, 1.0, SeedSpec(17)));
  ToyModel m = InitModel(3, 2, LooConfig());
  Record query = pool.records[0];
  std::vector<Record> candidates(pool.records.begin() + 1,
                                 pool.records.begin() + 20);
  Record twin = query;
  twin.id = 999;
  candidates.push_back(twin);
  std::vector<Neighbor> n = Unwrap(LatentNeighbors(query, candidates, m, 3));
  ASSERT_EQ(n.size(), 3u);
  EXPECT_EQ(n[0].id, 999);
  EXPECT_NEAR(n[0].distance, 0.0, 1e-12);
}

TEST(LatentNeighborsTest, AllCandidatesSortedAndZeroNormLast) {
  PopulationPool pool = Unwrap(GenPopulation(3, 2, 50, 1.0, SeedSpec(18)));
  ToyModel m = InitModel(3, 2, LooConfig());
  std::vector<Record> candidates(pool.records.begin() + 1,
                                 pool.records.begin() + 10);
  Record zero{500, {0.0, 0.0, 0.0}, 0};
  candidates.insert(candidates.begin(), zero);
  std::vector<Neighbor> n =
      Unwrap(LatentNeighbors(pool.records[0], candidates, m, candidates.size()));
  ASSERT_EQ(n.size(), candidates.size());
  for (size_t i = 1; i < n.size(); ++i) {
    EXPECT_LE(n[i - 1].distance, n[i].distance);
  }
  EXPECT_EQ(n.back().id, 500);
}

TEST(LatentNeighborsTest, MatchesBruteForce) {
  Rng rng(SeedSpec(19));
  PopulationPool pool = Unwrap(GenPopulation(4, 3, 200, 1.0, SeedSpec(20)));
  for (int t = 0; t < 100; ++t) {
    TrainConfig c = LooConfig();
    c.seed = SeedSpec(100 + t);
    ToyModel m = InitModel(4, 3, c);
    const size_t q = rng.UniformBelow(pool.size());
    std::vector<Record> candidates;
    for (const Record& r : pool.records) {
      if (static_cast<size_t>(r.id) != q && rng.Bernoulli(0.2)) {
        candidates.push_back(r);
      }
    }
    const size_t k = 1 + rng.UniformBelow(candidates.size());
    std::vector<std::pair<double, RecordId>> brute;
    const std::vector<double> qe = Unwrap(m.Penultimate(pool.records[q]));
    for (const Record& r : candidates) {
      brute.push_back({BruteCosine(qe, Unwrap(m.Penultimate(r))), r.id});
    }
    std::sort(brute.begin(), brute.end());
    std::vector<Neighbor> n =
        Unwrap(LatentNeighbors(pool.records[q], candidates, m, k));
    for (size_t i = 0; i < k; ++i) {
      ASSERT_EQ(n[i].id, brute[i].second);
      ASSERT_EQ(n[i].distance, brute[i].first);
    }
  }
}

TEST(LatentNeighborsTest, Errors) {
  PopulationPool pool = Unwrap(GenPopulation(3, 2, 50, 1.0, SeedSpec(21)));
  ToyModel logistic(3, 0, 2);
  std::vector<Record> candidates(pool.records.begin() + 1,
                                 pool.records.begin() + 5);
  EXPECT_FALSE(LatentNeighbors(pool.records[0], candidates, logistic, 1).ok());
  ToyModel m = InitModel(3, 2, LooConfig());
  EXPECT_FALSE(LatentNeighbors(pool.records[0], candidates, m, 10).ok());
  candidates.push_back(pool.records[0]);
  EXPECT_FALSE(LatentNeighbors(pool.records[0], candidates, m, 1).ok());
}

TEST(ScatterCsvTest, Layout) {
  const std::vector<RecordId> ids = {4};
  const std::vector<double> a = {0.5};
  const std::vector<double> b = {-1.0};
  EXPECT_EQ(ScatterCsv(ids, a, b),
            "record_id,confidence_a,confidence_b\n4,0.5,-1\n");
}

Lemma1Options SmallLemma(double temperature, int trials) {
  Lemma1Options o;
  o.temperature = temperature;
  o.trials = trials;
  o.sampler.burn_in = 300;
  o.self_test_datasets = 2;
  o.seed = SeedSpec(22);
  return o;
}

TEST(Lemma1Test, HotPosteriorLeaksNothing) {
  PopulationPool pool = Unwrap(GenPopulation(1, 2, 12, 1.0, SeedSpec(23)));
  Lemma1Result r = Unwrap(Lemma1Experiment(pool, SmallLemma(1e6, 1000)));
  EXPECT_TRUE(r.enumerated);
  EXPECT_NEAR(r.auc_loss_threshold, 0.5, 0.05);
  EXPECT_NEAR(r.auc_bayes_oracle, 0.5, 0.05);
  EXPECT_LE(r.self_test_deviation, 1e-3);
}

TEST(Lemma1Test, DeterministicOnBothPaths) {
  PopulationPool pool = Unwrap(GenPopulation(1, 2, 12, 1.0, SeedSpec(24)));
  Lemma1Options o = SmallLemma(0.1, 20);
  Lemma1Result a = Unwrap(Lemma1Experiment(pool, o));
  Lemma1Result b = Unwrap(Lemma1Experiment(pool, o));
  EXPECT_EQ(a.oracle_scores, b.oracle_scores);
  EXPECT_EQ(a.loss_scores, b.loss_scores);
  o.max_datasets = 1;
  o.importance_samples = 2;
  Lemma1Result c = Unwrap(Lemma1Experiment(pool, o));
  Lemma1Result d = Unwrap(Lemma1Experiment(pool, o));
  EXPECT_FALSE(c.enumerated);
  EXPECT_EQ(c.oracle_scores, d.oracle_scores);
  EXPECT_EQ(c.loss_scores, a.loss_scores);
}

TEST(Lemma1Test, SampledOracleTracksEnumeration) {
  PopulationPool pool = Unwrap(GenPopulation(1, 2, 12, 1.0, SeedSpec(27)));
  Lemma1Options o = SmallLemma(2.0, 8);
  o.n = 4;
  Lemma1Result exact = Unwrap(Lemma1Experiment(pool, o));
  o.max_datasets = 1;
  o.importance_samples = 128;
  Lemma1Result sampled = Unwrap(Lemma1Experiment(pool, o));
  ASSERT_TRUE(exact.enumerated);
  ASSERT_FALSE(sampled.enumerated);
  ASSERT_EQ(sampled.oracle_scores.size(), exact.oracle_scores.size());
  for (size_t i = 0; i < exact.oracle_scores.size(); ++i) {
    EXPECT_NEAR(sampled.oracle_scores[i], exact.oracle_scores[i], 0.1) << i;
  }
}

TEST(Lemma1Test, RejectsUnsupportedSettings) {
  PopulationPool wide = Unwrap(GenPopulation(2, 2, 40, 1.0, SeedSpec(25)));
  EXPECT_FALSE(Lemma1Experiment(wide, SmallLemma(0.1, 10)).ok());
  PopulationPool pool = Unwrap(GenPopulation(1, 2, 40, 1.0, SeedSpec(26)));
  Lemma1Options o = SmallLemma(0.1, 10);
  o.n = 17;
  EXPECT_FALSE(Lemma1Experiment(pool, o).ok());
  o = SmallLemma(0.1, 10);
  o.grid_cells = 100;
  EXPECT_FALSE(Lemma1Experiment(pool, o).ok());
}

}  // namespace
}  // namespace miaudit
