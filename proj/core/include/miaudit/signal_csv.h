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

#ifndef MIAUDIT_SIGNAL_CSV_H_
#define MIAUDIT_SIGNAL_CSV_H_

#include <string>
#include "absl/strings/string_view.h"

#include "absl/status/statusor.h"
#include "miaudit/types.h"

namespace miaudit {

// Which out world (or external source) a signal file holds.
enum class SignalKind {
  kShadow,
  kPopulation,
  kReference,
  kDistilled,
  kLeaveOneOut,
  kExternal,
};

absl::string_view SignalKindName(SignalKind kind);
absl::StatusOr<SignalKind> ParseSignalKind(absl::string_view name);

// Shortest decimal string that parses back to exactly `value`.
std::string FormatDouble(double value);

// Signal CSV layout:
//
//   #kind=<Shadow|Population|Reference|Distilled|LeaveOneOut|External>
//   model_id,<record_id>,<record_id>,...
//   <model_id>,<loss>,<loss>,...
//   ...
//
// Losses are written with FormatDouble. The optional membership companion
// file has the same two header lines and 0/1 cells.
absl::StatusOr<std::string> EncodeSignalCsv(const SignalMatrix& m,
                                            SignalKind kind);
absl::StatusOr<std::string> EncodeMembershipCsv(const SignalMatrix& m,
                                                SignalKind kind);

struct SignalFile {
  SignalKind kind = SignalKind::kExternal;
  SignalMatrix matrix;
};

// Parses and validates a signal CSV. Errors cite 1-based line numbers.
absl::StatusOr<SignalFile> DecodeSignalCsv(absl::string_view text);

// Parses a membership companion and attaches it to `file->matrix`. The header
// must match the signal file exactly.
absl::Status DecodeMembershipCsv(absl::string_view text, SignalFile* file);

// "<dir>/reference.csv" -> "<dir>/reference.membership.csv".
std::string MembershipPathFor(absl::string_view signal_path);

// Writes the signal file, plus the membership companion when present.
absl::Status WriteSignalFile(const std::string& path, const SignalMatrix& m,
                             SignalKind kind);

// Reads a signal file and, if it exists, its membership companion.
absl::StatusOr<SignalFile> ReadSignalFile(const std::string& path);

// Whole-file helpers shared with the CLI.
absl::StatusOr<std::string> ReadTextFile(const std::string& path);
absl::Status WriteTextFile(const std::string& path, absl::string_view content);

}  // namespace miaudit

#endif  // MIAUDIT_SIGNAL_CSV_H_
