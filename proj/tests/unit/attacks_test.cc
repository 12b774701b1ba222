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


#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "miaudit/attack.h"
#include "miaudit/model.h"
#include "miaudit/online_attack.h"
#include "miaudit/out_world.h"
#include "miaudit/population.h"
#include "miaudit/threshold_fn.h"
#include "test_util.h"

namespace miaudit {
namespace {

using ::miaudit::testing::MessageOf;
using ::miaudit::testing::Unwrap;
using ::testing::HasSubstr;

TEST(DecideFromLossTest, Member) {
  AttackDecision d = DecideFromLoss(0.2, 0.5, 0.1);
  EXPECT_EQ(d.predicted_bit, 1);
  EXPECT_DOUBLE_EQ(d.confidence, 0.3);
  EXPECT_EQ(d.alpha, 0.1);
}

TEST(DecideFromLossTest, TieIsMember) {
  AttackDecision d = DecideFromLoss(0.5, 0.5, 0.1);
  EXPECT_EQ(d.predicted_bit, 1);
  EXPECT_EQ(d.confidence, 0.0);
}

TEST(DecideFromLossTest, NonMember) {
  AttackDecision d = DecideFromLoss(1.0, 0.5, 0.1);
  EXPECT_EQ(d.predicted_bit, 0);
  EXPECT_DOUBLE_EQ(d.confidence, -0.5);
}

ThresholdFn ReferenceFn() {
  OutWorldSet s;
  s.kind = SignalKind::kReference;
  s.matrix = SignalMatrix::Zeros({"r0", "r1", "r2", "r3", "r4"}, {0, 1});
  s.matrix.values = {0.1, 1.0, 0.2, 2.0, 0.3, 3.0, 0.4, 4.0, 0.5, 5.0};
  return Unwrap(CalibrateR(s, SmoothingMethod::kLinearInterp));
}

TEST(DecideTest, UsesModelLossAndThreshold) {
  PopulationPool pool = Unwrap(GenPopulation(2, 2, 10, 1.0, SeedSpec(1)));
  ToyModel uniform(2, 0, 2);
  uniform.set_id("u");
  ThresholdFn fn = ReferenceFn();
  // Loss log 2 ~ 0.693 against record 1's thresholds {1, ..., 5}.
  AttackDecision d = Unwrap(Decide(fn, uniform, pool.record(1), 0.0));
  EXPECT_EQ(d.predicted_bit, 1);
  EXPECT_NEAR(d.loss, std::log(2.0), 1e-12);
  EXPECT_DOUBLE_EQ(d.threshold, 1.0);
  d = Unwrap(Decide(fn, uniform, pool.record(0), 1.0));
  EXPECT_EQ(d.predicted_bit, 0);
  EXPECT_FALSE(Decide(fn, uniform, pool.record(2), 0.5).ok());
}

TEST(DecideBatchTest, EmptyInput) {
  EXPECT_TRUE(Unwrap(DecideBatch(ReferenceFn(), {}, 0.1)).empty());
}

TEST(DecideBatchTest, MatchesElementwise) {
  ThresholdFn fn = ReferenceFn();
  std::vector<ScoredTarget> targets = {
      {{"a", 0, 0}, 0.15}, {{"b", 1, 1}, 3.5}, {{"c", 0, 1}, 0.5}};
  std::vector<AttackDecision> batch = Unwrap(DecideBatch(fn, targets, 0.5));
  ASSERT_EQ(batch.size(), 3u);
  for (size_t i = 0; i < targets.size(); ++i) {
    AttackDecision one = Unwrap(DecideScored(fn, targets[i], 0.5));
    EXPECT_EQ(batch[i].predicted_bit, one.predicted_bit);
    EXPECT_EQ(batch[i].threshold, one.threshold);
  }
  std::vector<AttackDecision> again = Unwrap(DecideBatch(fn, targets, 0.5));
  for (size_t i = 0; i < targets.size(); ++i) {
    EXPECT_EQ(again[i].confidence, batch[i].confidence);
  }
}

TEST(DecideBatchTest, FailureNamesIndex) {
  std::vector<ScoredTarget> targets = {{{"a", 0, 0}, 0.1}, {{"a", 9, 0}, 0.1}};
  EXPECT_THAT(MessageOf(DecideBatch(ReferenceFn(), targets, 0.5).status()),
              HasSubstr("challenge 1"));
}

TEST(AttackTest, MemberSetGrowsWithAlpha) {
  ThresholdFn fn = ReferenceFn();
  for (double loss = 0.0; loss < 6.0; loss += 0.05) {
    int prev = 0;
    for (double a = 0.0; a <= 1.0; a += 0.05) {
      const int bit = Unwrap(DecideScored(fn, {{"m", 1, 0}, loss}, a)).predicted_bit;
      EXPECT_GE(bit, prev);
      prev = bit;
    }
  }
}

TEST(AttackTest, DecisionDependsOnlyOnLossAndThreshold) {
  ThresholdFn fn = ReferenceFn();
  AttackDecision a = Unwrap(DecideScored(fn, {{"m1", 1, 0}, 2.0}, 0.5));
  AttackDecision b = Unwrap(DecideScored(fn, {{"m2", 1, 1}, 2.0}, 0.5));
  EXPECT_EQ(a.predicted_bit, b.predicted_bit);
  EXPECT_EQ(a.confidence, b.confidence);
}

TEST(AttackKindTest, NamesRoundTrip) {
  for (AttackKind k : {AttackKind::kS, AttackKind::kP, AttackKind::kR,
                       AttackKind::kD, AttackKind::kL}) {
    EXPECT_EQ(Unwrap(ParseAttackKind(AttackKindName(k))), k);
  }
  EXPECT_FALSE(ParseAttackKind("Q").ok());
  EXPECT_EQ(DependencyName(DependencyOf(AttackKind::kD)), "{record,model}");
}

TEST(DecisionCsvTest, Layout) {
  std::vector<ScoredTarget> targets = {{{"m", 3, 1}, 0.25}};
  std::vector<AttackDecision> d = {DecideFromLoss(0.25, 0.5, 0.1)};
  EXPECT_EQ(DecisionCsv(AttackKind::kR, targets, d),
            "model_id,record_id,attack,alpha,loss,threshold,confidence,"
            "predicted_bit\nm,3,R,0.1,0.25,0.5,0.25,1\n");
}

TEST(OnlineAttackTest, AttackLRequiresKnownDataset) {
  PopulationPool pool = Unwrap(GenPopulation(2, 2, 200, 1.0, SeedSpec(2)));
  OnlineAttackOptions o;
  o.kind = AttackKind::kL;
  o.num_models = 3;
  o.train.hidden_width = 0;
  o.train.epochs = 2;
  o.train.batch_size = 8;
  Adversary adv = Unwrap(MakeOnlineAdversary(pool, o));
  Challenge c;
  c.model = std::make_shared<ToyModel>(2, 0, 2);
  c.record = pool.record(0);
  GameContext ctx;
  ctx.pool = &pool;
  EXPECT_EQ(adv({c, 0.1, ctx}).status().code(),
            absl::StatusCode::kFailedPrecondition);
}

}  // namespace
}  // namespace miaudit
