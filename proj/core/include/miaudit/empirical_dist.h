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

#ifndef MIAUDIT_EMPIRICAL_DIST_H_
#define MIAUDIT_EMPIRICAL_DIST_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"

namespace miaudit {

// A sorted sample l_0 <= ... <= l_N of non-negative finite losses, with the
// Gaussian fit of the logit-rescaled losses computed once at construction.
class EmpiricalDist {
 public:
  static absl::StatusOr<EmpiricalDist> Create(std::vector<double> losses);

  std::span<const double> losses() const { return losses_; }
  size_t size() const { return losses_.size(); }
  double min() const { return losses_.front(); }
  double max() const { return losses_.back(); }
  double mean() const { return mean_; }
  // Population variance.
  double variance() const { return variance_; }

  // Sample mean and population standard deviation of LogitTransform(l_i).
  double logit_mean() const { return logit_mean_; }
  double logit_stddev() const { return logit_stddev_; }

 private:
  EmpiricalDist() = default;

  std::vector<double> losses_;
  double mean_ = 0.0;
  double variance_ = 0.0;
  double logit_mean_ = 0.0;
  double logit_stddev_ = 0.0;
};

}  // namespace miaudit

#endif  // MIAUDIT_EMPIRICAL_DIST_H_
