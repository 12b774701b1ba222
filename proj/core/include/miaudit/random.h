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

#ifndef MIAUDIT_RANDOM_H_
#define MIAUDIT_RANDOM_H_

#include <cstdint>
#include <random>
#include <span>
#include <utility>

#include "miaudit/seed.h"

namespace miaudit {

// Deterministic random source. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; the distributions below are written out
// here instead of using <random> distributions, whose algorithms are
// implementation-defined.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}
  explicit Rng(const SeedSpec& spec) : engine_(DeriveSeed(spec)) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform();

  // Uniform on (0, 1).
  double UniformOpen();

  // Uniform integer in [0, n). Requires n > 0. Rejection-free for powers of
  // two, otherwise unbiased rejection sampling.
  uint64_t UniformBelow(uint64_t n);

  bool Bernoulli(double p) { return Uniform() < p; }

  // Standard normal via the Box-Muller transform (one value cached).
  double Normal();

  // Fisher-Yates shuffle driven by UniformBelow.
  template <typename T>
  void Shuffle(std::span<T> items) {
    for (size_t i = items.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(UniformBelow(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace miaudit

#endif  // MIAUDIT_RANDOM_H_
