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

#include "miaudit/types.h"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "absl/strings/str_cat.h"
#include "miaudit/seed.h"

namespace miaudit {

bool Dataset::Contains(RecordId id) const {
  return std::find(record_ids.begin(), record_ids.end(), id) !=
         record_ids.end();
}

uint64_t DatasetFingerprint(std::span<const RecordId> ids) {
  std::vector<RecordId> sorted(ids.begin(), ids.end());
  std::sort(sorted.begin(), sorted.end());
  uint64_t h = Mix64(sorted.size());
  for (RecordId id : sorted) {
    h = Mix64(h ^ static_cast<uint64_t>(id)) + 0x9E3779B97F4A7C15ULL;
  }
  return h;
}

absl::Status ValidateDataset(const Dataset& dataset, size_t pool_size) {
  std::unordered_set<RecordId> seen;
  for (RecordId id : dataset.record_ids) {
    if (id < 0 || static_cast<size_t>(id) >= pool_size) {
      return absl::InvalidArgumentError(
          absl::StrCat("record id ", id, " not in pool of size ", pool_size));
    }
    if (!seen.insert(id).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate record id ", id, " in dataset"));
    }
  }
  return absl::OkStatus();
}

SignalMatrix SignalMatrix::Zeros(std::vector<std::string> model_ids,
                                 std::vector<RecordId> record_ids) {
  SignalMatrix m;
  m.model_ids = std::move(model_ids);
  m.record_ids = std::move(record_ids);
  m.values.assign(m.rows() * m.cols(), 0.0);
  return m;
}

absl::Status ValidateMatrix(const SignalMatrix& m) {
  if (m.values.size() != m.rows() * m.cols()) {
    return absl::InvalidArgumentError(
        absl::StrCat("values shape: expected ", m.rows(), "x", m.cols(),
                     " = ", m.rows() * m.cols(), " cells, got ",
                     m.values.size()));
  }
  if (m.membership.has_value() && m.membership->size() != m.values.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("membership shape: expected ", m.values.size(),
                     " cells, got ", m.membership->size()));
  }
  std::unordered_set<std::string> model_seen;
  for (const std::string& id : m.model_ids) {
    if (!model_seen.insert(id).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate model id ", id));
    }
  }
  std::unordered_set<RecordId> record_seen;
  for (RecordId id : m.record_ids) {
    if (id < 0) {
      return absl::InvalidArgumentError(absl::StrCat("negative record id ", id));
    }
    if (!record_seen.insert(id).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate record id ", id));
    }
  }
  for (size_t r = 0; r < m.rows(); ++r) {
    for (size_t c = 0; c < m.cols(); ++c) {
      const double v = m.at(r, c);
      if (!std::isfinite(v)) {
        return absl::InvalidArgumentError(
            absl::StrCat("non-finite value at (", r, ",", c, ")"));
      }
      if (v < 0.0) {
        return absl::InvalidArgumentError(
            absl::StrCat("negative value at (", r, ",", c, ")"));
      }
    }
  }
  if (m.membership.has_value()) {
    for (size_t i = 0; i < m.membership->size(); ++i) {
      if ((*m.membership)[i] > 1) {
        return absl::InvalidArgumentError(absl::StrCat(
            "membership value at (", i / std::max<size_t>(m.cols(), 1), ",",
            i % std::max<size_t>(m.cols(), 1), ") is not 0/1"));
      }
    }
  }
  return absl::OkStatus();
}

}  // namespace miaudit
