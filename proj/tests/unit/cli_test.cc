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


#include <string>

#include "commands.h"
#include "config.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace miaudit::cli {
namespace {

using ::miaudit::testing::MessageOf;
using ::miaudit::testing::Unwrap;
using ::testing::ElementsAre;
using ::testing::HasSubstr;

constexpr char kMinimal[] = R"(
[population]
dim = 2
classes = 2
pool_size = 100

[training]
dataset_size = 10
epochs = 3

[attack]
kinds = S, R

[seeds]
root = 7
)";

TEST(ConfigTest, ParsesMinimalConfigWithDefaults) {
  ExperimentConfig c = Unwrap(ParseConfig(kMinimal));
  EXPECT_EQ(c.population.dim, 2);
  EXPECT_EQ(c.population.pool_size, 100u);
  EXPECT_EQ(c.training.train.epochs, 3);
  EXPECT_EQ(c.root_seed, 7u);
  EXPECT_THAT(c.attack.kinds, ElementsAre(AttackKind::kS, AttackKind::kR));
  EXPECT_THAT(c.attack.alphas, ElementsAre(0.01, 0.05, 0.1, 0.3));
  EXPECT_EQ(c.attack.distill_size, 10u);
  EXPECT_FALSE(c.game.has_value());
  EXPECT_EQ(c.hash.size(), 16u);
}

TEST(ConfigTest, MissingRootSeedNamesTheField) {
  std::string text = kMinimal;
  text = text.substr(0, text.find("[seeds]"));
  EXPECT_THAT(MessageOf(ParseConfig(text).status()), HasSubstr("seeds.root"));
}

TEST(ConfigTest, RejectsUnknownKeysAndBadValues) {
  EXPECT_THAT(MessageOf(ParseConfig(std::string(kMinimal) + "typo = 1\n")
                            .status()),
              HasSubstr("seeds.typo"));
  std::string bad = kMinimal;
  bad.replace(bad.find("dim = 2"), 7, "dim = x");
  EXPECT_THAT(MessageOf(ParseConfig(bad).status()),
              HasSubstr("population.dim must be an integer"));
  std::string small = kMinimal;
  small.replace(small.find("pool_size = 100"), 15, "pool_size = 99");
  EXPECT_THAT(MessageOf(ParseConfig(small).status()), HasSubstr("10 *"));
}

TEST(ConfigTest, HashIgnoresOutputButTracksSettings) {
  const std::string base = Unwrap(ParseConfig(kMinimal)).hash;
  EXPECT_EQ(Unwrap(ParseConfig(std::string(kMinimal) + "[output]\ndir = a\n"))
                .hash,
            base);
  std::string other = kMinimal;
  other.replace(other.find("root = 7"), 8, "root = 8");
  EXPECT_NE(Unwrap(ParseConfig(other)).hash, base);
}

TEST(ConfigTest, OverridesChangeHashAndSettings) {
  ExperimentConfig c = Unwrap(ParseConfig(kMinimal));
  RunOptions o;
  o.out_dir = "/tmp/x";
  ExperimentConfig same = Unwrap(ResolveConfig(c, o));
  EXPECT_EQ(same.hash, c.hash);
  EXPECT_EQ(same.output_dir, "/tmp/x");
  o.alphas = std::vector<double>{0.2};
  o.method = SmoothingMethod::kMinOfBoth;
  ExperimentConfig changed = Unwrap(ResolveConfig(c, o));
  EXPECT_NE(changed.hash, c.hash);
  EXPECT_THAT(changed.attack.alphas, ElementsAre(0.2));
  EXPECT_EQ(changed.attack.method, SmoothingMethod::kMinOfBoth);
  EXPECT_FALSE(ResolveConfig(c, RunOptions{}).ok());
}

TEST(ConfigTest, AlphaList) {
  EXPECT_THAT(Unwrap(ParseAlphaList("0, 0.5,1")), ElementsAre(0.0, 0.5, 1.0));
  EXPECT_FALSE(ParseAlphaList("0.5,1.5").ok());
  EXPECT_FALSE(ParseAlphaList("").ok());
}

}  // namespace
}  // namespace miaudit::cli
