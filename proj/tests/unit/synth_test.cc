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


#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "miaudit/model.h"
#include "miaudit/population.h"
#include "miaudit/posterior.h"
#include "miaudit/random.h"
#include "miaudit/trainer.h"
#include "test_util.h"

namespace miaudit {
namespace {

using ::miaudit::testing::MessageOf;
using ::miaudit::testing::Unwrap;
using ::testing::HasSubstr;

TEST(GenPopulationTest, ZeroScalePlacesRecordsAtMeans) {
  PopulationPool pool = Unwrap(GenPopulation(2, 2, 4, 0.0, SeedSpec(1)));
  ASSERT_EQ(pool.size(), 4u);
  int counts[2] = {0, 0};
  for (const Record& r : pool.records) {
    ++counts[r.label];
    EXPECT_EQ(r.features, pool.class_means[r.label]);
  }
  EXPECT_EQ(counts[0], 2);
  EXPECT_EQ(counts[1], 2);
  EXPECT_NE(pool.class_means[0], pool.class_means[1]);
}

TEST(GenPopulationTest, LabelsAreBalanced) {
  PopulationPool pool = Unwrap(GenPopulation(8, 4, 10000, 1.0, SeedSpec(2)));
  std::vector<int> counts(4, 0);
  for (const Record& r : pool.records) ++counts[r.label];
  EXPECT_EQ(counts, (std::vector<int>{2500, 2500, 2500, 2500}));
}

TEST(GenPopulationTest, SameSeedSamePool) {
  PopulationPool a = Unwrap(GenPopulation(3, 3, 50, 1.0, SeedSpec(3)));
  PopulationPool b = Unwrap(GenPopulation(3, 3, 50, 1.0, SeedSpec(3)));
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.records[i].features, b.records[i].features);
    EXPECT_EQ(a.records[i].label, b.records[i].label);
  }
}

TEST(GenPopulationTest, OneDimensionalTwoClassMeansDiffer) {
  PopulationPool pool = Unwrap(GenPopulation(1, 2, 10, 0.0, SeedSpec(4)));
  EXPECT_NEAR(pool.class_means[0][0], -pool.class_means[1][0], 1e-12);
  EXPECT_GT(std::abs(pool.class_means[0][0]), 0.5);
}

TEST(GenPopulationTest, RejectsBadShape) {
  EXPECT_FALSE(GenPopulation(0, 2, 10, 1.0, SeedSpec(0)).ok());
  EXPECT_FALSE(GenPopulation(2, 1, 10, 1.0, SeedSpec(0)).ok());
  EXPECT_FALSE(GenPopulation(2, 4, 3, 1.0, SeedSpec(0)).ok());
}

TEST(SampleDatasetTest, ExhaustiveDrawIsPermutation) {
  PopulationPool pool = Unwrap(GenPopulation(2, 2, 100, 1.0, SeedSpec(5)));
  Dataset d =
      Unwrap(SampleDataset(pool, 100, WithoutReplacement{}, SeedSpec(6)));
  std::set<RecordId> ids(d.record_ids.begin(), d.record_ids.end());
  EXPECT_EQ(ids.size(), 100u);
  EXPECT_EQ(*ids.begin(), 0);
  EXPECT_EQ(*ids.rbegin(), 99);
}

TEST(SampleDatasetTest, PoissonSizeConcentrates) {
  PopulationPool pool = Unwrap(GenPopulation(2, 2, 10000, 1.0, SeedSpec(7)));
  Dataset d =
      Unwrap(SampleDataset(pool, 0, PoissonSampling{0.5}, SeedSpec(8)));
  EXPECT_NEAR(static_cast<double>(d.size()), 5000.0, 3.0 * std::sqrt(2500.0));
}

TEST(SampleDatasetTest, PoissonInclusionFrequency) {
  PopulationPool pool = Unwrap(GenPopulation(2, 2, 50, 1.0, SeedSpec(9)));
  constexpr int kDraws = 10000;
  constexpr double kRate = 0.3;
  int hits = 0;
  for (int i = 0; i < kDraws; ++i) {
    Dataset d = Unwrap(SampleDataset(pool, 0, PoissonSampling{kRate},
                                     SeedSpec(10).Child("draw", i)));
    hits += d.Contains(17) ? 1 : 0;
  }
  EXPECT_NEAR(static_cast<double>(hits) / kDraws, kRate,
              3.0 * std::sqrt(kRate * (1 - kRate) / kDraws));
}

TEST(SampleDatasetTest, ExcludedIdNeverDrawn) {
  PopulationPool pool = Unwrap(GenPopulation(2, 2, 200, 1.0, SeedSpec(11)));
  for (int i = 0; i < 10000; ++i) {
    Dataset d = Unwrap(SampleDataset(pool, 50, WithoutReplacement{},
                                     SeedSpec(12).Child("draw", i), {7}));
    ASSERT_FALSE(d.Contains(7));
  }
}

TEST(SampleDatasetTest, Errors) {
  PopulationPool pool = Unwrap(GenPopulation(2, 2, 10, 1.0, SeedSpec(13)));
  EXPECT_FALSE(SampleDataset(pool, 10, WithoutReplacement{}, SeedSpec(0), {1})
                   .ok());
  EXPECT_FALSE(SampleDataset(pool, 0, PoissonSampling{0.0}, SeedSpec(0)).ok());
  EXPECT_FALSE(SampleDataset(pool, 0, PoissonSampling{1.5}, SeedSpec(0)).ok());
}

TrainConfig SmallConfig(int hidden = 4) {
  TrainConfig c;
  c.hidden_width = hidden;
  c.epochs = 20;
  c.batch_size = 8;
  c.learning_rate = 0.1;
  c.seed = SeedSpec(100);
  return c;
}

TEST(TrainTest, ZeroLearningRateKeepsInitialization) {
  PopulationPool pool = Unwrap(GenPopulation(3, 2, 100, 1.0, SeedSpec(14)));
  Dataset d = Unwrap(SampleDataset(pool, 20, WithoutReplacement{}, SeedSpec(15)));
  TrainConfig c = SmallConfig();
  c.epochs = 1;
  c.learning_rate = 0.0;
  ToyModel trained = Unwrap(Train(pool, d, c));
  ToyModel init = InitModel(3, 2, c);
  EXPECT_TRUE(std::equal(trained.params().begin(), trained.params().end(),
                         init.params().begin(), init.params().end()));
}

TEST(TrainTest, FitsSeparableData) {
  PopulationPool pool = Unwrap(GenPopulation(2, 2, 40, 0.0, SeedSpec(16)));
  Dataset d = Unwrap(SampleDataset(pool, 20, WithoutReplacement{}, SeedSpec(17)));
  TrainConfig c = SmallConfig(0);
  c.epochs = 50;
  ToyModel m = Unwrap(Train(pool, d, c));
  for (RecordId id : d.record_ids) {
    const std::vector<double> p = m.PredictProba(pool.record(id));
    const int predicted =
        static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
    EXPECT_EQ(predicted, pool.record(id).label);
  }
}

TEST(TrainTest, DeterministicAndFingerprinted) {
  PopulationPool pool = Unwrap(GenPopulation(3, 3, 100, 1.0, SeedSpec(18)));
  Dataset d = Unwrap(SampleDataset(pool, 30, WithoutReplacement{}, SeedSpec(19)));
  ToyModel a = Unwrap(Train(pool, d, SmallConfig()));
  ToyModel b = Unwrap(Train(pool, d, SmallConfig()));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.dataset_fingerprint(), DatasetFingerprint(d));
  TrainConfig other = SmallConfig();
  other.seed = SeedSpec(101);
  EXPECT_NE(Unwrap(Train(pool, d, other)).train_fingerprint(),
            a.train_fingerprint());
}

TEST(TrainTest, RejectsBadConfig) {
  TrainConfig c = SmallConfig();
  c.epochs = 0;
  EXPECT_THAT(MessageOf(ValidateTrainConfig(c)), HasSubstr("epochs"));
  c = SmallConfig();
  c.batch_size = 0;
  EXPECT_FALSE(ValidateTrainConfig(c).ok());
  c = SmallConfig();
  c.clip_norm = 0.0;
  EXPECT_FALSE(ValidateTrainConfig(c).ok());
}

TEST(TrainTest, DivergenceNamesEpoch) {
  PopulationPool pool = Unwrap(GenPopulation(2, 2, 40, 1.0, SeedSpec(20)));
  Dataset d = Unwrap(SampleDataset(pool, 20, WithoutReplacement{}, SeedSpec(21)));
  TrainConfig c = SmallConfig();
  c.learning_rate = 1e308;
  absl::StatusOr<ToyModel> m = Train(pool, d, c);
  ASSERT_FALSE(m.ok());
  EXPECT_THAT(MessageOf(m.status()), HasSubstr("diverged at epoch"));
}

TEST(TrainTest, GradientMatchesFiniteDifferences) {
  PopulationPool pool = Unwrap(GenPopulation(3, 3, 60, 1.0, SeedSpec(22)));
  for (int probe = 0; probe < 5; ++probe) {
    TrainConfig c = SmallConfig(probe % 2 == 0 ? 4 : 0);
    c.seed = SeedSpec(200 + probe);
    ToyModel model = InitModel(3, 3, c);
    std::vector<std::vector<double>> targets;
    std::vector<Example> batch;
    for (int i = 0; i < 6; ++i) {
      std::vector<double> t(3, 0.0);
      t[pool.records[i].label] = 1.0;
      targets.push_back(t);
    }
    for (int i = 0; i < 6; ++i) {
      batch.push_back({pool.records[i].features, targets[i]});
    }
    std::vector<double> grad(model.params().size());
    BatchLossAndGradient(model, batch, grad);
    std::vector<double> tmp(grad.size());
    for (size_t p = 0; p < grad.size(); ++p) {
      const double h = 1e-6;
      const double orig = model.params()[p];
      model.params()[p] = orig + h;
      const double up = BatchLossAndGradient(model, batch, tmp);
      model.params()[p] = orig - h;
      const double down = BatchLossAndGradient(model, batch, tmp);
      model.params()[p] = orig;
      const double fd = (up - down) / (2 * h);
      EXPECT_NEAR(grad[p], fd, 1e-4 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST(TrainTest, ClipBoundsAppliedNorm) {
  PopulationPool pool = Unwrap(GenPopulation(4, 2, 100, 1.0, SeedSpec(23)));
  Dataset d = Unwrap(SampleDataset(pool, 40, WithoutReplacement{}, SeedSpec(24)));
  TrainConfig c = SmallConfig();
  c.learning_rate = 1.0;
  c.clip_norm = 0.05;
  int steps = 0;
  int clipped = 0;
  TrainObserver observer = [&](const TrainStep& s) {
    ++steps;
    EXPECT_LE(s.applied_norm, *c.clip_norm + 1e-9);
    if (s.grad_norm > *c.clip_norm) ++clipped;
  };
  Unwrap(Train(pool, d, c, &observer));
  EXPECT_EQ(steps, c.epochs * 5);
  EXPECT_GT(clipped, 0);
}

TEST(ModelTest, LossAnalyticCases) {
  ToyModel m(1, 0, 2);
  m.b2()[0] = 100.0;
  const std::vector<double> x = {0.0};
  EXPECT_EQ(m.Loss(x, 0), 0.0);
  m.b2()[0] = 0.0;
  m.b2()[1] = std::log(std::exp(1.0) - 1.0);
  EXPECT_NEAR(m.Loss(x, 0), 1.0, 1e-12);
  m.b2()[1] = 1000.0;
  EXPECT_NEAR(m.Loss(x, 0), -std::log(kProbabilityFloor), 1e-9);
  EXPECT_TRUE(std::isfinite(m.Loss(x, 0)));
}

TEST(ModelTest, ProbabilitiesSumToOne) {
  Rng rng(SeedSpec(25));
  for (int i = 0; i < 1000; ++i) {
    TrainConfig c = SmallConfig(static_cast<int>(rng.UniformBelow(5)));
    c.weight_init_scale = 3.0;
    c.seed = SeedSpec(300 + i);
    ToyModel m = InitModel(4, 5, c);
    std::vector<double> x(4);
    for (double& v : x) v = 5.0 * rng.Normal();
    const std::vector<double> p = m.PredictProba(x);
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-9);
  }
}

TEST(ModelTest, Penultimate) {
  ToyModel zero(3, 16, 2);
  Record r{0, {1.0, 2.0, 3.0}, 0};
  std::vector<double> e = Unwrap(zero.Penultimate(r));
  EXPECT_EQ(e, std::vector<double>(16, 0.0));
  TrainConfig c = SmallConfig(16);
  ToyModel m = InitModel(3, 2, c);
  Record copy = r;
  copy.id = 5;
  EXPECT_EQ(Unwrap(m.Penultimate(r)), Unwrap(m.Penultimate(copy)));
  EXPECT_EQ(Unwrap(m.Penultimate(r)).size(), 16u);
  ToyModel logistic(3, 0, 2);
  EXPECT_THAT(MessageOf(logistic.Penultimate(r).status()),
              HasSubstr("no hidden layer"));
}

TEST(ModelTest, SerializationRoundTrips) {
  ToyModel m = InitModel(3, 4, SmallConfig(5));
  m.set_id("target-0");
  m.set_train_fingerprint(123);
  m.set_dataset_fingerprint(456);
  EXPECT_EQ(Unwrap(DeserializeModel(SerializeModel(m))), m);
  EXPECT_FALSE(DeserializeModel("garbage\n").ok());
}

TEST(SoftLabelTest, UniformModelGivesUniformLabels) {
  PopulationPool pool = Unwrap(GenPopulation(2, 4, 40, 1.0, SeedSpec(26)));
  ToyModel uniform(2, 0, 4);
  const std::vector<RecordId> ids = {0, 1, 2};
  for (const SoftLabel& s : Unwrap(SoftLabelRecords(uniform, pool, ids))) {
    for (double p : s.probs) EXPECT_NEAR(p, 0.25, 1e-12);
  }
  EXPECT_TRUE(Unwrap(SoftLabelRecords(uniform, pool, {})).empty());
}

TEST(SoftLabelTest, SaturatedModelIsNearOneHot) {
  PopulationPool pool = Unwrap(GenPopulation(2, 2, 40, 0.0, SeedSpec(27)));
  Dataset d = Unwrap(SampleDataset(pool, 10, WithoutReplacement{}, SeedSpec(28)));
  TrainConfig c = SmallConfig(0);
  c.epochs = 500;
  c.learning_rate = 1.0;
  ToyModel m = Unwrap(Train(pool, d, c));
  const std::vector<RecordId> ids = {d.record_ids[0]};
  SoftLabel s = Unwrap(SoftLabelRecords(m, pool, ids))[0];
  EXPECT_GT(s.probs[pool.record(ids[0]).label], 0.99);
  EXPECT_NEAR(s.probs[0] + s.probs[1], 1.0, 1e-9);
}

double MeanKlToUniform(const ToyModel& m, const PopulationPool& pool) {
  double total = 0.0;
  for (const Record& r : pool.records) {
    const std::vector<double> p = m.PredictProba(r);
    for (double q : p) total += q * std::log(q * p.size());
  }
  return total / pool.size();
}

TEST(DistillTest, UniformTeacherPullsStudentToUniform) {
  PopulationPool pool = Unwrap(GenPopulation(3, 3, 300, 1.0, SeedSpec(29)));
  ToyModel teacher(3, 0, 3);
  TrainConfig c = SmallConfig(4);
  c.weight_init_scale = 2.0;
  c.epochs = 50;
  ToyModel student = Unwrap(Distill(teacher, pool, 60, c, SeedSpec(30)));
  EXPECT_LT(MeanKlToUniform(student, pool),
            MeanKlToUniform(InitModel(3, 3, c), pool));
}

TEST(DistillTest, DeterministicAndRejectsEmptySet) {
  PopulationPool pool = Unwrap(GenPopulation(3, 3, 300, 1.0, SeedSpec(31)));
  ToyModel teacher = InitModel(3, 3, SmallConfig(4));
  ToyModel a = Unwrap(Distill(teacher, pool, 30, SmallConfig(), SeedSpec(32)));
  ToyModel b = Unwrap(Distill(teacher, pool, 30, SmallConfig(), SeedSpec(32)));
  EXPECT_EQ(a, b);
  EXPECT_THAT(
      MessageOf(Distill(teacher, pool, 0, SmallConfig(), SeedSpec(32)).status()),
      HasSubstr("empty distillation set"));
}

TEST(DistillTest, ExcludedRecordNotInDistillationSet) {
  PopulationPool pool = Unwrap(GenPopulation(3, 3, 60, 1.0, SeedSpec(33)));
  ToyModel teacher = InitModel(3, 3, SmallConfig(4));
  for (int i = 0; i < 20; ++i) {
    Dataset used;
    Unwrap(Distill(teacher, pool, 50, SmallConfig(), SeedSpec(34).Child("d", i),
                   {3}, &used));
    EXPECT_FALSE(used.Contains(3));
    EXPECT_EQ(used.size(), 50u);
  }
}

// Per-coordinate sample mean and its standard error from batch means, which
// absorbs the chain's autocorrelation.
std::pair<double, double> MeanAndStdError(const std::vector<double>& v) {
  constexpr size_t kBatches = 50;
  const size_t per = v.size() / kBatches;
  std::vector<double> means;
  for (size_t b = 0; b < kBatches; ++b) {
    means.push_back(
        std::accumulate(v.begin() + b * per, v.begin() + (b + 1) * per, 0.0) /
        per);
  }
  const double mean =
      std::accumulate(means.begin(), means.end(), 0.0) / kBatches;
  double var = 0.0;
  for (double m : means) var += (m - mean) * (m - mean);
  var /= kBatches - 1;
  return {mean, std::sqrt(var / kBatches)};
}

TEST(PosteriorTest, HotChainIsUniformOverBox) {
  PopulationPool pool = Unwrap(GenPopulation(1, 2, 20, 1.0, SeedSpec(35)));
  Dataset d = Unwrap(SampleDataset(pool, 4, WithoutReplacement{}, SeedSpec(36)));
  PosteriorConfig c;
  c.temperature = 1e9;
  c.step_size = 4.0;
  c.burn_in = 100;
  c.thinning = 5;
  c.box_radius = 3.0;
  c.seed = SeedSpec(37);
  std::vector<ToyModel> chain = Unwrap(PosteriorChain(pool, d, c, 5000));
  for (int coord = 0; coord < 2; ++coord) {
    std::vector<double> v;
    for (const ToyModel& m : chain) v.push_back(FreeFromLogistic(m)[coord]);
    auto [mean, se] = MeanAndStdError(v);
    EXPECT_NEAR(mean, 0.0, 3.0 * se);
    double sq = 0.0;
    for (double x : v) sq += x * x;
    // Uniform on [-r, r] has variance r^2 / 3.
    EXPECT_NEAR(sq / v.size(), 3.0, 0.3);
  }
}

TEST(PosteriorTest, SymmetricDataGivesSymmetricPosterior) {
  PopulationPool pool;
  pool.dim = 1;
  pool.num_classes = 2;
  pool.records = {{0, {1.0}, 0}, {1, {1.0}, 1}};
  Dataset d;
  d.record_ids = {0, 1};
  PosteriorConfig c;
  c.temperature = 1.0;
  c.step_size = 1.0;
  c.burn_in = 500;
  c.thinning = 4;
  c.seed = SeedSpec(38);
  std::vector<ToyModel> chain = Unwrap(PosteriorChain(pool, d, c, 5000));
  std::vector<double> w;
  for (const ToyModel& m : chain) w.push_back(FreeFromLogistic(m)[0]);
  auto [mean, se] = MeanAndStdError(w);
  EXPECT_NEAR(mean, 0.0, 3.0 * se);
}

TEST(PosteriorTest, DeterministicAndValidated) {
  PopulationPool pool = Unwrap(GenPopulation(1, 2, 20, 1.0, SeedSpec(39)));
  Dataset d = Unwrap(SampleDataset(pool, 4, WithoutReplacement{}, SeedSpec(40)));
  PosteriorConfig c;
  c.burn_in = 200;
  c.seed = SeedSpec(41);
  EXPECT_EQ(Unwrap(PosteriorSample(pool, d, c)),
            Unwrap(PosteriorSample(pool, d, c)));
  c.temperature = 0.0;
  EXPECT_FALSE(PosteriorSample(pool, d, c).ok());
}

}  // namespace
}  // namespace miaudit
