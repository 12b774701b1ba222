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

#ifndef MIAUDIT_NORMAL_H_
#define MIAUDIT_NORMAL_H_

namespace miaudit {

// Standard normal CDF, 0.5 * erfc(-x / sqrt(2)).
double NormalCdf(double x);

// Standard normal quantile by Wichura's AS241 (PPND16) rational
// approximations, accurate to about 1e-16 relative. Requires 0 < p < 1.
double NormalQuantile(double p);

}  // namespace miaudit

#endif  // MIAUDIT_NORMAL_H_
