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

#ifndef MIAUDIT_SMOOTHING_H_
#define MIAUDIT_SMOOTHING_H_

#include "absl/strings/string_view.h"

#include "absl/status/statusor.h"
#include "miaudit/empirical_dist.h"

namespace miaudit {

// How a discrete loss histogram is turned into a continuous percentile.
enum class SmoothingMethod {
  kLinearInterp,
  kLogitRescale,
  kMinOfBoth,
  kAvgConfidence,
};

// "linear", "logit", "min", "avg".
absl::string_view SmoothingMethodName(SmoothingMethod m);
absl::StatusOr<SmoothingMethod> ParseSmoothingMethod(absl::string_view name);

// Losses are clamped into [kLogitLossFloor, kLogitLossCeil] before the
// logit transform, which diverges at 0.
inline constexpr double kLogitLossFloor = 1e-7;
inline constexpr double kLogitLossCeil = 30.0;

// phi(l) = log(e^-l / (1 - e^-l)) on the clamped loss. Strictly decreasing.
double LogitTransform(double loss);
// phi^-1(v) = log(1 + e^-v).
double InverseLogitTransform(double v);

// With k = floor(alpha * N):
//   p(alpha) = l_k * (k + 1 - alpha * N) + (alpha * N - k) * l_{k+1}
// and p(1) = l_N. Requires 0 <= alpha <= 1 and at least two losses.
absl::StatusOr<double> PercentileLinear(const EmpiricalDist& dist,
                                        double alpha);

// Solves phi(p) = mu + sigma * NormalQuantile(1 - alpha) for the Gaussian
// fit (mu, sigma) of the transformed losses. sigma = 0 gives phi^-1(mu) for
// every alpha. Requires 0 < alpha < 1.
absl::StatusOr<double> PercentileLogit(const EmpiricalDist& dist,
                                       double alpha);

// min(PercentileLinear, PercentileLogit).
absl::StatusOr<double> ThresholdMin(const EmpiricalDist& dist, double alpha);

// Piecewise-linear CDF whose inverse is PercentileLinear: 0 below l_0,
// 1 at or above l_N, k / N at l_k (right-continuous across ties).
double CdfLinear(const EmpiricalDist& dist, double loss);

// 1 - Phi((phi(loss) - mu) / sigma), the CDF whose inverse is
// PercentileLogit. A step at phi^-1(mu) when sigma = 0.
double CdfLogit(const EmpiricalDist& dist, double loss);

// (CdfLinear + CdfLogit) / 2.
double ConfidenceAvg(const EmpiricalDist& dist, double loss);

// Smallest loss with ConfidenceAvg >= alpha, found by bisection.
// Requires 0 < alpha < 1.
absl::StatusOr<double> ThresholdAvg(const EmpiricalDist& dist, double alpha);

// Dispatch on `method`.
absl::StatusOr<double> SmoothedPercentile(const EmpiricalDist& dist,
                                          double alpha,
                                          SmoothingMethod method);

// The CDF matching SmoothedPercentile: for kMinOfBoth this is
// max(CdfLinear, CdfLogit), since min(p_lin, p_logit) <= l iff either is.
double SmoothedCdf(const EmpiricalDist& dist, double loss,
                   SmoothingMethod method);

// Membership score, higher = more likely member: an increasing function of
// -SmoothedCdf. For kLogitRescale it is the unsaturated z-score
// (phi(loss) - mu) / sigma, so scores stay distinct far in the tails.
double MembershipScore(const EmpiricalDist& dist, double loss,
                       SmoothingMethod method);

}  // namespace miaudit

#endif  // MIAUDIT_SMOOTHING_H_
