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

#include "miaudit/signal_csv.h"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"

namespace miaudit {
namespace {

constexpr absl::string_view kKindPrefix = "#kind=";

absl::Status LineError(size_t line, absl::string_view what) {
  return absl::InvalidArgumentError(absl::StrCat("line ", line, ": ", what));
}

std::vector<absl::string_view> SplitLines(absl::string_view text) {
  std::vector<absl::string_view> lines = absl::StrSplit(text, '\n');
  for (absl::string_view& line : lines) line = absl::StripSuffix(line, "\r");
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::string HeaderLines(const SignalMatrix& m, SignalKind kind) {
  std::string out = absl::StrCat(kKindPrefix, SignalKindName(kind), "\n");
  out += "model_id";
  for (RecordId id : m.record_ids) absl::StrAppend(&out, ",", id);
  out += "\n";
  return out;
}

absl::Status CheckModelIds(const SignalMatrix& m) {
  for (const std::string& id : m.model_ids) {
    if (id.empty() || absl::StrContains(id, ',') ||
        absl::StrContains(id, '\n') || id.front() == '#') {
      return absl::InvalidArgumentError(
          absl::StrCat("model id '", id, "' cannot be written to CSV"));
    }
  }
  return absl::OkStatus();
}

}  // namespace

absl::string_view SignalKindName(SignalKind kind) {
  switch (kind) {
    case SignalKind::kShadow:
      return "Shadow";
    case SignalKind::kPopulation:
      return "Population";
    case SignalKind::kReference:
      return "Reference";
    case SignalKind::kDistilled:
      return "Distilled";
    case SignalKind::kLeaveOneOut:
      return "LeaveOneOut";
    case SignalKind::kExternal:
      return "External";
  }
  return "External";
}

absl::StatusOr<SignalKind> ParseSignalKind(absl::string_view name) {
  for (SignalKind kind :
       {SignalKind::kShadow, SignalKind::kPopulation, SignalKind::kReference,
        SignalKind::kDistilled, SignalKind::kLeaveOneOut,
        SignalKind::kExternal}) {
    if (SignalKindName(kind) == name) return kind;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown signal kind '", name, "'"));
}

std::string FormatDouble(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

absl::StatusOr<std::string> EncodeSignalCsv(const SignalMatrix& m,
                                            SignalKind kind) {
  if (absl::Status s = ValidateMatrix(m); !s.ok()) return s;
  if (absl::Status s = CheckModelIds(m); !s.ok()) return s;
  std::string out = HeaderLines(m, kind);
  for (size_t r = 0; r < m.rows(); ++r) {
    out += m.model_ids[r];
    for (size_t c = 0; c < m.cols(); ++c) {
      absl::StrAppend(&out, ",", FormatDouble(m.at(r, c)));
    }
    out += "\n";
  }
  return out;
}

absl::StatusOr<std::string> EncodeMembershipCsv(const SignalMatrix& m,
                                                SignalKind kind) {
  if (!m.membership.has_value()) {
    return absl::FailedPreconditionError("matrix has no membership table");
  }
  if (absl::Status s = ValidateMatrix(m); !s.ok()) return s;
  if (absl::Status s = CheckModelIds(m); !s.ok()) return s;
  std::string out = HeaderLines(m, kind);
  for (size_t r = 0; r < m.rows(); ++r) {
    out += m.model_ids[r];
    for (size_t c = 0; c < m.cols(); ++c) {
      absl::StrAppend(&out, ",", (*m.membership)[r * m.cols() + c] ? "1" : "0");
    }
    out += "\n";
  }
  return out;
}

absl::StatusOr<SignalFile> DecodeSignalCsv(absl::string_view text) {
  std::vector<absl::string_view> lines = SplitLines(text);
  if (lines.empty() || !absl::StartsWith(lines[0], kKindPrefix)) {
    return LineError(1, "expected '#kind=<kind>'");
  }
  SignalFile file;
  absl::StatusOr<SignalKind> kind =
      ParseSignalKind(lines[0].substr(kKindPrefix.size()));
  if (!kind.ok()) return LineError(1, kind.status().message());
  file.kind = *kind;

  if (lines.size() < 2) return LineError(2, "missing header row");
  std::vector<absl::string_view> header = absl::StrSplit(lines[1], ',');
  if (header[0] != "model_id") {
    return LineError(2, "header must start with 'model_id'");
  }
  SignalMatrix& m = file.matrix;
  for (size_t i = 1; i < header.size(); ++i) {
    RecordId id = 0;
    auto [ptr, ec] =
        std::from_chars(header[i].data(), header[i].data() + header[i].size(), id);
    if (ec != std::errc() || ptr != header[i].data() + header[i].size() ||
        id < 0) {
      return LineError(2, absl::StrCat("bad record id '", header[i], "'"));
    }
    m.record_ids.push_back(id);
  }

  for (size_t li = 2; li < lines.size(); ++li) {
    const size_t line_no = li + 1;
    std::vector<absl::string_view> cells = absl::StrSplit(lines[li], ',');
    if (cells.size() != header.size()) {
      return LineError(line_no, absl::StrCat("expected ", header.size(),
                                             " cells, got ", cells.size()));
    }
    if (cells[0].empty()) return LineError(line_no, "empty model id");
    m.model_ids.emplace_back(cells[0]);
    for (size_t c = 1; c < cells.size(); ++c) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(
          cells[c].data(), cells[c].data() + cells[c].size(), v);
      if (ec != std::errc() || ptr != cells[c].data() + cells[c].size()) {
        return LineError(line_no, absl::StrCat("bad number '", cells[c], "'"));
      }
      if (!std::isfinite(v)) {
        return LineError(line_no, absl::StrCat("non-finite loss in column ", c));
      }
      if (v < 0.0) {
        return LineError(line_no, absl::StrCat("negative loss in column ", c));
      }
      m.values.push_back(v);
    }
  }
  if (absl::Status s = ValidateMatrix(m); !s.ok()) return s;
  return file;
}

absl::Status DecodeMembershipCsv(absl::string_view text, SignalFile* file) {
  std::vector<absl::string_view> lines = SplitLines(text);
  const SignalMatrix& m = file->matrix;
  absl::StatusOr<std::string> expected = EncodeSignalCsv(m, file->kind);
  if (!expected.ok()) return expected.status();
  std::vector<absl::string_view> expected_lines = SplitLines(*expected);
  for (size_t i = 0; i < 2; ++i) {
    if (lines.size() <= i || lines[i] != expected_lines[i]) {
      return LineError(i + 1, "membership header does not match signal file");
    }
  }
  if (lines.size() - 2 != m.rows()) {
    return absl::InvalidArgumentError(
        absl::StrCat("membership shape: expected ", m.rows(), " rows, got ",
                     lines.size() - 2));
  }
  std::vector<uint8_t> bits;
  bits.reserve(m.values.size());
  for (size_t li = 2; li < lines.size(); ++li) {
    std::vector<absl::string_view> cells = absl::StrSplit(lines[li], ',');
    if (cells.size() != m.cols() + 1) {
      return LineError(li + 1, "membership shape");
    }
    if (cells[0] != m.model_ids[li - 2]) {
      return LineError(li + 1, "membership row model id mismatch");
    }
    for (size_t c = 1; c < cells.size(); ++c) {
      if (cells[c] == "0") {
        bits.push_back(0);
      } else if (cells[c] == "1") {
        bits.push_back(1);
      } else {
        return LineError(li + 1,
                         absl::StrCat("membership cell '", cells[c],
                                      "' is not 0/1"));
      }
    }
  }
  file->matrix.membership = std::move(bits);
  return absl::OkStatus();
}

std::string MembershipPathFor(absl::string_view signal_path) {
  absl::string_view base = signal_path;
  if (absl::EndsWith(base, ".csv")) base.remove_suffix(4);
  return absl::StrCat(base, ".membership.csv");
}

absl::StatusOr<std::string> ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

absl::Status WriteTextFile(const std::string& path, absl::string_view content) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return absl::UnavailableError(absl::StrCat("cannot write ", path));
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) return absl::UnavailableError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

absl::Status WriteSignalFile(const std::string& path, const SignalMatrix& m,
                             SignalKind kind) {
  absl::StatusOr<std::string> text = EncodeSignalCsv(m, kind);
  if (!text.ok()) return text.status();
  if (absl::Status s = WriteTextFile(path, *text); !s.ok()) return s;
  if (m.membership.has_value()) {
    absl::StatusOr<std::string> bits = EncodeMembershipCsv(m, kind);
    if (!bits.ok()) return bits.status();
    return WriteTextFile(MembershipPathFor(path), *bits);
  }
  return absl::OkStatus();
}

absl::StatusOr<SignalFile> ReadSignalFile(const std::string& path) {
  absl::StatusOr<std::string> text = ReadTextFile(path);
  if (!text.ok()) return text.status();
  absl::StatusOr<SignalFile> file = DecodeSignalCsv(*text);
  if (!file.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat(path, ": ", file.status().message()));
  }
  const std::string companion = MembershipPathFor(path);
  if (std::filesystem::exists(companion)) {
    absl::StatusOr<std::string> bits = ReadTextFile(companion);
    if (!bits.ok()) return bits.status();
    if (absl::Status s = DecodeMembershipCsv(*bits, &*file); !s.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat(companion, ": ", s.message()));
    }
  }
  return file;
}

}  // namespace miaudit
