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

#ifndef MIAUDIT_PARALLEL_H_
#define MIAUDIT_PARALLEL_H_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

#include "absl/status/status.h"

namespace miaudit {

// Runs fn(0), ..., fn(n - 1) on up to `workers` threads. Work items must be
// independent; results are expected to be written into pre-sized slots so
// that output order never depends on scheduling. Returns the error of the
// lowest failing index, or OK.
inline absl::Status ParallelFor(size_t n, int workers,
                                const std::function<absl::Status(size_t)>& fn) {
  if (workers <= 1 || n <= 1) {
    for (size_t i = 0; i < n; ++i) {
      absl::Status status = fn(i);
      if (!status.ok()) return status;
    }
    return absl::OkStatus();
  }
  std::vector<absl::Status> statuses(n);
  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (size_t i = next++; i < n; i = next++) {
      if (failed.load(std::memory_order_relaxed)) break;
      statuses[i] = fn(i);
      if (!statuses[i].ok()) failed = true;
    }
  };
  const size_t thread_count =
      std::min<size_t>(static_cast<size_t>(workers), n);
  std::vector<std::jthread> threads;
  threads.reserve(thread_count);
  for (size_t t = 0; t < thread_count; ++t) threads.emplace_back(work);
  threads.clear();
  for (const absl::Status& status : statuses) {
    if (!status.ok()) return status;
  }
  return absl::OkStatus();
}

}  // namespace miaudit

#endif  // MIAUDIT_PARALLEL_H_
