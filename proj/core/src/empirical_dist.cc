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

#include "miaudit/empirical_dist.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "miaudit/smoothing.h"

namespace miaudit {
namespace {

// Two-pass mean and population variance.
std::pair<double, double> Moments(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / v.size();
  double sq = 0.0;
  for (double x : v) sq += (x - mean) * (x - mean);
  return {mean, sq / v.size()};
}

}  // namespace

absl::StatusOr<EmpiricalDist> EmpiricalDist::Create(std::vector<double> losses) {
  if (losses.empty()) {
    return absl::InvalidArgumentError("empty loss distribution");
  }
  for (size_t i = 0; i < losses.size(); ++i) {
    if (!std::isfinite(losses[i])) {
      return absl::InvalidArgumentError(
          absl::StrCat("non-finite loss at index ", i));
    }
    if (losses[i] < 0.0) {
      return absl::InvalidArgumentError(
          absl::StrCat("negative loss at index ", i));
    }
  }
  std::sort(losses.begin(), losses.end());
  EmpiricalDist dist;
  dist.losses_ = std::move(losses);
  std::tie(dist.mean_, dist.variance_) = Moments(dist.losses_);
  std::vector<double> transformed(dist.losses_.size());
  std::transform(dist.losses_.begin(), dist.losses_.end(), transformed.begin(),
                 LogitTransform);
  const auto [mu, var] = Moments(transformed);
  dist.logit_mean_ = mu;
  dist.logit_stddev_ = std::sqrt(var);
  return dist;
}

}  // namespace miaudit
