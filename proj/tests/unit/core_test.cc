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


#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "miaudit/random.h"
#include "miaudit/seed.h"
#include "miaudit/types.h"
#include "test_util.h"

namespace miaudit {
namespace {

using ::miaudit::testing::MessageOf;
using ::testing::HasSubstr;

TEST(DeriveSeedTest, EmptyPathIsDeterministic) {
  EXPECT_EQ(DeriveSeed(SeedSpec(0)), DeriveSeed(SeedSpec(0)));
}

TEST(DeriveSeedTest, DistinctIndicesGiveDistinctSeeds) {
  EXPECT_NE(DeriveSeed(SeedSpec(42).Child("shadow", 0)),
            DeriveSeed(SeedSpec(42).Child("shadow", 1)));
}

TEST(DeriveSeedTest, DistinctTagsGiveDistinctSeeds) {
  EXPECT_NE(DeriveSeed(SeedSpec(42).Child("shadow", 0)),
            DeriveSeed(SeedSpec(42).Child("reference", 0)));
}

TEST(DeriveSeedTest, PathsAreNotFlattened) {
  EXPECT_NE(DeriveSeed(SeedSpec(1).Child("a").Child("b")),
            DeriveSeed(SeedSpec(1).Child("b").Child("a")));
}

TEST(DeriveSeedTest, AdjacentIndexAvalanche) {
  constexpr int kPairs = 10000;
  double flips = 0.0;
  for (int i = 0; i < kPairs; ++i) {
    const SeedSpec base(static_cast<uint64_t>(i) * 7919);
    const uint64_t a = DeriveSeed(base.Child("trial", i));
    const uint64_t b = DeriveSeed(base.Child("trial", i + 1));
    flips += std::popcount(a ^ b);
  }
  const double mean = flips / kPairs;
  EXPECT_GE(mean, 20.0);
  EXPECT_LE(mean, 44.0);
}

TEST(DeriveSeedTest, ToStringListsPath) {
  EXPECT_EQ(SeedSpec(7).Child("shadow", 3).Child("train").ToString(),
            "7/shadow:3/train:0");
}

TEST(RngTest, SameSeedSameStream) {
  Rng a(SeedSpec(5).Child("x"));
  Rng b(SeedSpec(5).Child("x"));
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.NextU64(), b.NextU64());
}

TEST(RngTest, UniformBelowStaysInRange) {
  Rng rng(SeedSpec(3));
  for (int i = 0; i < 1000; ++i) EXPECT_LT(rng.UniformBelow(7), 7u);
}

TEST(RngTest, ShuffleIsPermutation) {
  std::vector<int> v = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  Rng rng(SeedSpec(9));
  rng.Shuffle(std::span<int>(v));
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, (std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}));
}

SignalMatrix Filled(size_t rows, size_t cols, double v) {
  std::vector<std::string> models;
  for (size_t r = 0; r < rows; ++r) models.push_back("m" + std::to_string(r));
  std::vector<RecordId> records;
  for (size_t c = 0; c < cols; ++c) records.push_back(static_cast<RecordId>(c));
  SignalMatrix m = SignalMatrix::Zeros(models, records);
  std::fill(m.values.begin(), m.values.end(), v);
  return m;
}

TEST(ValidateMatrixTest, AcceptsWellFormedMatrix) {
  MIAUDIT_EXPECT_OK(ValidateMatrix(Filled(2, 3, 0.5)));
}

TEST(ValidateMatrixTest, ReportsNegativeValueWithPosition) {
  SignalMatrix m = Filled(2, 3, 0.5);
  m.at(0, 1) = -0.1;
  EXPECT_THAT(MessageOf(ValidateMatrix(m)), HasSubstr("negative value at (0,1)"));
}

TEST(ValidateMatrixTest, ReportsMembershipShape) {
  SignalMatrix m = Filled(2, 3, 0.5);
  m.membership = std::vector<uint8_t>(5, 0);
  EXPECT_THAT(MessageOf(ValidateMatrix(m)), HasSubstr("membership shape"));
}

TEST(ValidateMatrixTest, ReportsNonFiniteValue) {
  SignalMatrix m = Filled(1, 2, 0.5);
  m.at(0, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THAT(MessageOf(ValidateMatrix(m)), HasSubstr("non-finite value"));
}

TEST(ValidateMatrixTest, ReportsDuplicateIds) {
  SignalMatrix m = Filled(2, 2, 0.5);
  m.model_ids[1] = m.model_ids[0];
  EXPECT_THAT(MessageOf(ValidateMatrix(m)), HasSubstr("duplicate model id"));
  m = Filled(2, 2, 0.5);
  m.record_ids[1] = m.record_ids[0];
  EXPECT_THAT(MessageOf(ValidateMatrix(m)), HasSubstr("duplicate record id"));
}

TEST(ValidateMatrixTest, ReportsValuesShape) {
  SignalMatrix m = Filled(2, 2, 0.5);
  m.values.pop_back();
  EXPECT_THAT(MessageOf(ValidateMatrix(m)), HasSubstr("values shape"));
}

TEST(DatasetTest, FingerprintIgnoresOrder) {
  const std::vector<RecordId> a = {3, 1, 2};
  const std::vector<RecordId> b = {1, 2, 3};
  EXPECT_EQ(DatasetFingerprint(a), DatasetFingerprint(b));
  const std::vector<RecordId> c = {1, 2};
  EXPECT_NE(DatasetFingerprint(a), DatasetFingerprint(c));
}

TEST(DatasetTest, ValidateRejectsDuplicatesAndOutOfRange) {
  Dataset d;
  d.record_ids = {0, 1, 1};
  EXPECT_THAT(MessageOf(ValidateDataset(d, 10)), HasSubstr("duplicate"));
  d.record_ids = {0, 10};
  EXPECT_THAT(MessageOf(ValidateDataset(d, 10)), HasSubstr("not in pool"));
  d.record_ids = {0, 9};
  MIAUDIT_EXPECT_OK(ValidateDataset(d, 10));
}

}  // namespace
}  // namespace miaudit
