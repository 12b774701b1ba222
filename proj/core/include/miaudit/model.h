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

#ifndef MIAUDIT_MODEL_H_
#define MIAUDIT_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "miaudit/types.h"

namespace miaudit {

// Probabilities are clamped to this value before taking logs.
inline constexpr double kProbabilityFloor = 1e-12;

// A softmax classifier with at most one hidden layer:
//
//   hidden = tanh(W1 x + b1)            (h > 0)
//   logits = W2 hidden + b2             (W2 is K x h)
//   logits = W2 x + b2                  (h == 0, W2 is K x d)
//
// All parameters live in one flat vector laid out as [W1, b1, W2, b2], with
// matrices row-major.
class ToyModel {
 public:
  ToyModel() = default;
  ToyModel(int dim, int hidden, int classes);

  int dim() const { return dim_; }
  int hidden() const { return hidden_; }
  int classes() const { return classes_; }
  // Width of the layer feeding the output layer.
  int penultimate_width() const { return hidden_ > 0 ? hidden_ : dim_; }

  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }

  std::span<double> w1() { return Slice(w1_offset(), hidden_ * dim_); }
  std::span<double> b1() { return Slice(b1_offset(), hidden_); }
  std::span<double> w2() {
    return Slice(w2_offset(), classes_ * penultimate_width());
  }
  std::span<double> b2() { return Slice(b2_offset(), classes_); }

  size_t w1_offset() const { return 0; }
  size_t b1_offset() const { return static_cast<size_t>(hidden_ * dim_); }
  size_t w2_offset() const { return b1_offset() + hidden_; }
  size_t b2_offset() const {
    return w2_offset() + static_cast<size_t>(classes_ * penultimate_width());
  }

  // Writes the hidden activations (or a copy of x when h == 0) into `out`.
  void Features(std::span<const double> x, std::span<double> out) const;
  // Writes the K logits into `out`.
  void Logits(std::span<const double> x, std::span<double> out) const;

  std::vector<double> PredictProba(std::span<const double> x) const;
  std::vector<double> PredictProba(const Record& r) const {
    return PredictProba(r.features);
  }

  // Cross-entropy -log(max(p_label, kProbabilityFloor)).
  double Loss(std::span<const double> x, int label) const;
  double Loss(const Record& r) const { return Loss(r.features, r.label); }

  // Hidden-layer activation vector. Fails for h == 0.
  absl::StatusOr<std::vector<double>> Penultimate(const Record& r) const;

  bool AllFinite() const;

  const std::string& id() const { return id_; }
  void set_id(std::string id) { id_ = std::move(id); }
  uint64_t train_fingerprint() const { return train_fingerprint_; }
  void set_train_fingerprint(uint64_t f) { train_fingerprint_ = f; }
  uint64_t dataset_fingerprint() const { return dataset_fingerprint_; }
  void set_dataset_fingerprint(uint64_t f) { dataset_fingerprint_ = f; }

  bool operator==(const ToyModel&) const = default;

 private:
  std::span<double> Slice(size_t offset, int count) {
    return std::span<double>(params_).subspan(offset,
                                              static_cast<size_t>(count));
  }

  int dim_ = 0;
  int hidden_ = 0;
  int classes_ = 0;
  std::vector<double> params_;
  std::string id_;
  uint64_t train_fingerprint_ = 0;
  uint64_t dataset_fingerprint_ = 0;
};

// Numerically stable softmax of `logits` in place.
void SoftmaxInPlace(std::span<double> logits);

// Text serialization used by the CLI: a header line
// "toymodel <d> <h> <K> <train_fp> <dataset_fp> <id>" followed by one
// parameter per line in shortest round-trip form.
std::string SerializeModel(const ToyModel& model);
absl::StatusOr<ToyModel> DeserializeModel(absl::string_view text);

}  // namespace miaudit

#endif  // MIAUDIT_MODEL_H_
