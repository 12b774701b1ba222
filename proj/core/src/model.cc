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

#include "miaudit/model.h"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "miaudit/signal_csv.h"

namespace miaudit {

ToyModel::ToyModel(int dim, int hidden, int classes)
    : dim_(dim), hidden_(hidden), classes_(classes) {
  const int width = hidden > 0 ? hidden : dim;
  params_.assign(static_cast<size_t>(hidden * dim + hidden + classes * width +
                                     classes),
                 0.0);
}

void ToyModel::Features(std::span<const double> x,
                        std::span<double> out) const {
  if (hidden_ == 0) {
    std::copy(x.begin(), x.end(), out.begin());
    return;
  }
  const double* w = params_.data() + w1_offset();
  const double* b = params_.data() + b1_offset();
  for (int i = 0; i < hidden_; ++i) {
    double acc = b[i];
    const double* row = w + static_cast<size_t>(i) * dim_;
    for (int j = 0; j < dim_; ++j) acc += row[j] * x[j];
    out[i] = std::tanh(acc);
  }
}

void ToyModel::Logits(std::span<const double> x, std::span<double> out) const {
  const int width = penultimate_width();
  std::vector<double> feat(static_cast<size_t>(width));
  Features(x, feat);
  const double* w = params_.data() + w2_offset();
  const double* b = params_.data() + b2_offset();
  for (int k = 0; k < classes_; ++k) {
    double acc = b[k];
    const double* row = w + static_cast<size_t>(k) * width;
    for (int j = 0; j < width; ++j) acc += row[j] * feat[j];
    out[k] = acc;
  }
}

void SoftmaxInPlace(std::span<double> logits) {
  const double max = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double& v : logits) {
    v = std::exp(v - max);
    sum += v;
  }
  for (double& v : logits) v /= sum;
}

std::vector<double> ToyModel::PredictProba(std::span<const double> x) const {
  std::vector<double> p(static_cast<size_t>(classes_));
  Logits(x, p);
  SoftmaxInPlace(p);
  return p;
}

double ToyModel::Loss(std::span<const double> x, int label) const {
  const std::vector<double> p = PredictProba(x);
  return -std::log(std::max(p[static_cast<size_t>(label)], kProbabilityFloor));
}

absl::StatusOr<std::vector<double>> ToyModel::Penultimate(
    const Record& r) const {
  if (hidden_ == 0) {
    return absl::FailedPreconditionError("no hidden layer");
  }
  std::vector<double> out(static_cast<size_t>(hidden_));
  Features(r.features, out);
  return out;
}

bool ToyModel::AllFinite() const {
  return std::all_of(params_.begin(), params_.end(),
                     [](double v) { return std::isfinite(v); });
}

std::string SerializeModel(const ToyModel& model) {
  std::string out =
      absl::StrCat("toymodel ", model.dim(), " ", model.hidden(), " ",
                   model.classes(), " ", model.train_fingerprint(), " ",
                   model.dataset_fingerprint(), " ", model.id(), "\n");
  for (double v : model.params()) absl::StrAppend(&out, FormatDouble(v), "\n");
  return out;
}

absl::StatusOr<ToyModel> DeserializeModel(absl::string_view text) {
  std::vector<absl::string_view> lines =
      absl::StrSplit(text, '\n', absl::SkipEmpty());
  if (lines.empty()) return absl::InvalidArgumentError("empty model file");
  std::vector<absl::string_view> head = absl::StrSplit(lines[0], ' ');
  int d = 0, h = 0, k = 0;
  uint64_t train_fp = 0, data_fp = 0;
  if (head.size() < 6 || head[0] != "toymodel" ||
      !absl::SimpleAtoi(head[1], &d) || !absl::SimpleAtoi(head[2], &h) ||
      !absl::SimpleAtoi(head[3], &k) || !absl::SimpleAtoi(head[4], &train_fp) ||
      !absl::SimpleAtoi(head[5], &data_fp) || d < 1 || h < 0 || k < 2) {
    return absl::InvalidArgumentError("line 1: bad toymodel header");
  }
  ToyModel model(d, h, k);
  model.set_train_fingerprint(train_fp);
  model.set_dataset_fingerprint(data_fp);
  if (head.size() > 6) model.set_id(std::string(head[6]));
  std::span<double> params = model.params();
  if (lines.size() - 1 != params.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected ", params.size(), " parameters, got ",
                     lines.size() - 1));
  }
  for (size_t i = 0; i < params.size(); ++i) {
    absl::string_view cell = absl::StripSuffix(lines[i + 1], "\r");
    auto [ptr, ec] =
        std::from_chars(cell.data(), cell.data() + cell.size(), params[i]);
    if (ec != std::errc() || ptr != cell.data() + cell.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", i + 2, ": bad number '", cell, "'"));
    }
  }
  return model;
}

}  // namespace miaudit
