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

#ifndef MIAUDIT_TYPES_H_
#define MIAUDIT_TYPES_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"

namespace miaudit {

using RecordId = int64_t;

// A labeled example of a population pool. Ids are assigned at pool
// generation and index into PopulationPool::records.
struct Record {
  RecordId id = 0;
  std::vector<double> features;
  int label = 0;
};

// A training set, stored as ids into a pool rather than copies so that
// "the same dataset except z" is an exact set relation.
struct Dataset {
  std::vector<RecordId> record_ids;
  std::string pool_ref;

  size_t size() const { return record_ids.size(); }
  bool Contains(RecordId id) const;
};

// Order-independent hash of a set of record ids (hash of the sorted ids).
uint64_t DatasetFingerprint(std::span<const RecordId> ids);
inline uint64_t DatasetFingerprint(const Dataset& d) {
  return DatasetFingerprint(d.record_ids);
}

// Checks that ids are unique and all below `pool_size`.
absl::Status ValidateDataset(const Dataset& dataset, size_t pool_size);

// Models-by-records table of loss values. Rows are models, columns are
// records; `values` is row-major.
struct SignalMatrix {
  std::vector<std::string> model_ids;
  std::vector<RecordId> record_ids;
  std::vector<double> values;
  std::optional<std::vector<uint8_t>> membership;

  size_t rows() const { return model_ids.size(); }
  size_t cols() const { return record_ids.size(); }
  double at(size_t row, size_t col) const { return values[row * cols() + col]; }
  double& at(size_t row, size_t col) { return values[row * cols() + col]; }

  // Allocates a zero-filled matrix with the given ids.
  static SignalMatrix Zeros(std::vector<std::string> model_ids,
                            std::vector<RecordId> record_ids);

  bool operator==(const SignalMatrix&) const = default;
};

// Returns the first violated SignalMatrix invariant as InvalidArgument:
// shape mismatch, duplicate id, non-finite value or negative value.
absl::Status ValidateMatrix(const SignalMatrix& m);

}  // namespace miaudit

#endif  // MIAUDIT_TYPES_H_
