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

#ifndef MIAUDIT_SEED_H_
#define MIAUDIT_SEED_H_

#include <cstdint>
#include <string>
#include "absl/strings/string_view.h"
#include <vector>

namespace miaudit {

// One step of a seed derivation path, e.g. ("shadow", 3).
struct SeedStep {
  std::string tag;
  uint64_t index = 0;

  bool operator==(const SeedStep&) const = default;
};

// A root seed plus a derivation path. Every random choice in the toolkit is
// driven by a SeedSpec, so which seeds are shared ("fixed") and which are
// per-trial ("fresh") is explicit in the path.
class SeedSpec {
 public:
  SeedSpec() = default;
  explicit SeedSpec(uint64_t root) : root_(root) {}
  SeedSpec(uint64_t root, std::vector<SeedStep> path)
      : root_(root), path_(std::move(path)) {}

  // Returns a copy of this spec extended by (tag, index).
  SeedSpec Child(absl::string_view tag, uint64_t index = 0) const;

  uint64_t root() const { return root_; }
  const std::vector<SeedStep>& path() const { return path_; }

  // Human-readable form, e.g. "42/shadow:3/train:0".
  std::string ToString() const;

  bool operator==(const SeedSpec&) const = default;

 private:
  uint64_t root_ = 0;
  std::vector<SeedStep> path_;
};

// SplitMix64 finalizer.
uint64_t Mix64(uint64_t z);

// 64-bit FNV-1a over the bytes of `s`.
uint64_t Fnv1a64(absl::string_view s);

// Derives a 64-bit seed from a SeedSpec. The recipe is fixed and portable:
//
//   s = Mix64(root + 0x9E3779B97F4A7C15)
//   for each (tag, index) in path:
//     s = Mix64((s ^ Fnv1a64(tag)) + 0x9E3779B97F4A7C15)
//     s = Mix64((s ^ index)        + 0x9E3779B97F4A7C15)
//   return s
//
// All arithmetic is modulo 2^64.
uint64_t DeriveSeed(const SeedSpec& spec);

}  // namespace miaudit

#endif  // MIAUDIT_SEED_H_
