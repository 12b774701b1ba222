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

#include "miaudit/seed.h"

#include "absl/strings/str_cat.h"

namespace miaudit {
namespace {

constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

}  // namespace

SeedSpec SeedSpec::Child(absl::string_view tag, uint64_t index) const {
  SeedSpec child = *this;
  child.path_.push_back(SeedStep{std::string(tag), index});
  return child;
}

std::string SeedSpec::ToString() const {
  std::string out = absl::StrCat(root_);
  for (const SeedStep& step : path_) {
    absl::StrAppend(&out, "/", step.tag, ":", step.index);
  }
  return out;
}

uint64_t Mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

uint64_t Fnv1a64(absl::string_view s) {
  uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

uint64_t DeriveSeed(const SeedSpec& spec) {
  uint64_t s = Mix64(spec.root() + kGolden);
  for (const SeedStep& step : spec.path()) {
    s = Mix64((s ^ Fnv1a64(step.tag)) + kGolden);
    s = Mix64((s ^ step.index) + kGolden);
  }
  return s;
}

}  // namespace miaudit
