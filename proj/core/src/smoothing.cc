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

#include "miaudit/smoothing.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "miaudit/normal.h"

namespace miaudit {
namespace {

absl::Status CheckClosedAlpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("alpha ", alpha, " outside [0, 1]"));
  }
  return absl::OkStatus();
}

absl::Status CheckOpenAlpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("alpha ", alpha, " outside (0, 1)"));
  }
  return absl::OkStatus();
}

}  // namespace

absl::string_view SmoothingMethodName(SmoothingMethod m) {
  switch (m) {
    case SmoothingMethod::kLinearInterp:
      return "linear";
    case SmoothingMethod::kLogitRescale:
      return "logit";
    case SmoothingMethod::kMinOfBoth:
      return "min";
    case SmoothingMethod::kAvgConfidence:
      return "avg";
  }
  return "linear";
}

absl::StatusOr<SmoothingMethod> ParseSmoothingMethod(absl::string_view name) {
  for (SmoothingMethod m :
       {SmoothingMethod::kLinearInterp, SmoothingMethod::kLogitRescale,
        SmoothingMethod::kMinOfBoth, SmoothingMethod::kAvgConfidence}) {
    if (SmoothingMethodName(m) == name) return m;
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown smoothing method '", name, "' (want linear|logit|min|avg)"));
}

double LogitTransform(double loss) {
  const double l = std::clamp(loss, kLogitLossFloor, kLogitLossCeil);
  return -l - std::log(-std::expm1(-l));
}

double InverseLogitTransform(double v) {
  // log(1 + e^-v) without overflow for very negative v.
  return v < 0 ? -v + std::log1p(std::exp(v)) : std::log1p(std::exp(-v));
}

absl::StatusOr<double> PercentileLinear(const EmpiricalDist& dist,
                                        double alpha) {
  if (absl::Status s = CheckClosedAlpha(alpha); !s.ok()) return s;
  if (dist.size() < 2) {
    return absl::InvalidArgumentError("need at least two losses");
  }
  std::span<const double> l = dist.losses();
  const size_t n = l.size() - 1;
  const double an = alpha * static_cast<double>(n);
  const size_t k = static_cast<size_t>(std::floor(an));
  if (k >= n) return l[n];
  return l[k] * (static_cast<double>(k) + 1.0 - an) +
         (an - static_cast<double>(k)) * l[k + 1];
}

absl::StatusOr<double> PercentileLogit(const EmpiricalDist& dist,
                                       double alpha) {
  if (absl::Status s = CheckOpenAlpha(alpha); !s.ok()) return s;
  const double mu = dist.logit_mean();
  const double sigma = dist.logit_stddev();
  if (sigma == 0.0) return InverseLogitTransform(mu);
  return InverseLogitTransform(mu + sigma * NormalQuantile(1.0 - alpha));
}

absl::StatusOr<double> ThresholdMin(const EmpiricalDist& dist, double alpha) {
  absl::StatusOr<double> linear = PercentileLinear(dist, alpha);
  if (!linear.ok()) return linear.status();
  absl::StatusOr<double> logit = PercentileLogit(dist, alpha);
  if (!logit.ok()) return logit.status();
  return std::min(*linear, *logit);
}

double CdfLinear(const EmpiricalDist& dist, double loss) {
  std::span<const double> l = dist.losses();
  if (loss < l.front()) return 0.0;
  if (loss >= l.back()) return 1.0;
  // Last index with l_k <= loss; k < N here.
  const size_t k = static_cast<size_t>(
      std::upper_bound(l.begin(), l.end(), loss) - l.begin() - 1);
  const double n = static_cast<double>(l.size() - 1);
  const double frac = (loss - l[k]) / (l[k + 1] - l[k]);
  return (static_cast<double>(k) + frac) / n;
}

double CdfLogit(const EmpiricalDist& dist, double loss) {
  const double mu = dist.logit_mean();
  const double sigma = dist.logit_stddev();
  const double v = LogitTransform(loss);
  if (sigma == 0.0) return v <= mu ? 1.0 : 0.0;
  return NormalCdf((mu - v) / sigma);
}

double ConfidenceAvg(const EmpiricalDist& dist, double loss) {
  return 0.5 * (CdfLinear(dist, loss) + CdfLogit(dist, loss));
}

absl::StatusOr<double> ThresholdAvg(const EmpiricalDist& dist, double alpha) {
  if (absl::Status s = CheckOpenAlpha(alpha); !s.ok()) return s;
  double lo = 0.0;
  if (ConfidenceAvg(dist, lo) >= alpha) return lo;
  double hi = std::max(dist.max(), kLogitLossCeil);
  if (ConfidenceAvg(dist, hi) < alpha) return hi;
  // Invariant: F(lo) < alpha <= F(hi).
  for (int iter = 0; iter < 2000; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (ConfidenceAvg(dist, mid) >= alpha) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

absl::StatusOr<double> SmoothedPercentile(const EmpiricalDist& dist,
                                          double alpha,
                                          SmoothingMethod method) {
  switch (method) {
    case SmoothingMethod::kLinearInterp:
      return PercentileLinear(dist, alpha);
    case SmoothingMethod::kLogitRescale:
      return PercentileLogit(dist, alpha);
    case SmoothingMethod::kMinOfBoth:
      return ThresholdMin(dist, alpha);
    case SmoothingMethod::kAvgConfidence:
      return ThresholdAvg(dist, alpha);
  }
  return absl::InternalError("unknown smoothing method");
}

double SmoothedCdf(const EmpiricalDist& dist, double loss,
                   SmoothingMethod method) {
  switch (method) {
    case SmoothingMethod::kLinearInterp:
      return CdfLinear(dist, loss);
    case SmoothingMethod::kLogitRescale:
      return CdfLogit(dist, loss);
    case SmoothingMethod::kMinOfBoth:
      return std::max(CdfLinear(dist, loss), CdfLogit(dist, loss));
    case SmoothingMethod::kAvgConfidence:
      return ConfidenceAvg(dist, loss);
  }
  return 0.0;
}

double MembershipScore(const EmpiricalDist& dist, double loss,
                       SmoothingMethod method) {
  if (method == SmoothingMethod::kLogitRescale && dist.logit_stddev() > 0.0) {
    return (LogitTransform(loss) - dist.logit_mean()) / dist.logit_stddev();
  }
  return -SmoothedCdf(dist, loss, method);
}

}  // namespace miaudit
