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


#include "config.h"

#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "miaudit/seed.h"
#include "miaudit/signal_csv.h"

namespace miaudit::cli {
namespace {

using Section = std::map<std::string, std::string>;
using Sections = std::map<std::string, Section>;

const std::map<std::string, std::set<std::string>>& KnownKeys() {
  static const auto* keys = new std::map<std::string, std::set<std::string>>{
      {"population", {"dim", "classes", "pool_size", "class_scale"}},
      {"training",
       {"hidden_width", "epochs", "batch_size", "learning_rate", "clip_norm",
        "weight_init_scale", "dataset_size", "num_targets"}},
      {"attack",
       {"kinds", "alphas", "method", "n_shadow", "n_reference", "n_distilled",
        "m_per_class", "shadow_eval_per_class", "distill_size",
        "distill_epochs", "nonmembers"}},
      {"game", {"variant", "trials", "adversary", "adversary_models", "alpha"}},
      {"lemma1",
       {"pool_size", "class_scale", "n", "temperature", "trials", "grid_cells",
        "importance_samples"}},
      {"seeds", {"root"}},
      {"output", {"dir"}},
  };
  return *keys;
}

// Typed access to one section; errors name "section.key".
class Reader {
 public:
  Reader(const Sections& sections, std::string section)
      : section_(std::move(section)) {
    auto it = sections.find(section_);
    if (it != sections.end()) values_ = &it->second;
  }

  bool Has(const std::string& key) const {
    return values_ != nullptr && values_->count(key) > 0;
  }

  absl::StatusOr<std::string> String(const std::string& key) const {
    if (!Has(key)) {
      return absl::InvalidArgumentError(
          absl::StrCat("config is missing required field ", Name(key)));
    }
    return values_->at(key);
  }

  template <typename T>
  absl::Status Int(const std::string& key, T& out, bool required,
                   int64_t min_value) const {
    if (!Has(key)) return required ? String(key).status() : absl::OkStatus();
    int64_t v = 0;
    if (!absl::SimpleAtoi(values_->at(key), &v)) {
      return Invalid(key, "an integer");
    }
    if (v < min_value) {
      return absl::InvalidArgumentError(
          absl::StrCat(Name(key), " must be >= ", min_value));
    }
    out = static_cast<T>(v);
    return absl::OkStatus();
  }

  absl::Status Double(const std::string& key, double& out,
                      bool required) const {
    if (!Has(key)) return required ? String(key).status() : absl::OkStatus();
    if (!absl::SimpleAtod(values_->at(key), &out) || !std::isfinite(out)) {
      return Invalid(key, "a finite number");
    }
    return absl::OkStatus();
  }

  std::string Name(const std::string& key) const {
    return absl::StrCat(section_, ".", key);
  }

 private:
  absl::Status Invalid(const std::string& key, absl::string_view what) const {
    return absl::InvalidArgumentError(absl::StrCat(
        Name(key), " must be ", what, ", got '", values_->at(key), "'"));
  }

  std::string section_;
  const Section* values_ = nullptr;
};

#define MIAUDIT_RETURN_IF_ERROR(expr)              \
  do {                                             \
    if (absl::Status _s = (expr); !_s.ok()) return _s; \
  } while (false)

absl::StatusOr<Sections> ParseIni(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("config line ", e.line(), ": ", e.message()));
  }
  Sections sections;
  for (const auto& [name, section] : tree) {
    auto known = KnownKeys().find(name);
    if (known == KnownKeys().end()) {
      if (section.empty()) {
        return absl::InvalidArgumentError(
            absl::StrCat("config key '", name, "' must be inside a section"));
      }
      return absl::InvalidArgumentError(
          absl::StrCat("unknown config section [", name, "]"));
    }
    for (const auto& [key, value] : section) {
      if (known->second.count(key) == 0) {
        return absl::InvalidArgumentError(
            absl::StrCat("unknown config field ", name, ".", key));
      }
      sections[name][key] =
          std::string(absl::StripAsciiWhitespace(value.data()));
    }
  }
  return sections;
}

std::string CanonicalHash(const Sections& sections) {
  std::string canonical;
  for (const auto& [name, section] : sections) {
    if (name == "output") continue;
    for (const auto& [key, value] : section) {
      absl::StrAppend(&canonical, name, ".", key, "=", value, "\n");
    }
  }
  return absl::StrFormat("%016x", Fnv1a64(canonical));
}

absl::Status ParseTraining(const Reader& r, TrainingSection& t) {
  TrainConfig& c = t.train;
  MIAUDIT_RETURN_IF_ERROR(r.Int("dataset_size", t.dataset_size, true, 1));
  MIAUDIT_RETURN_IF_ERROR(r.Int("num_targets", t.num_targets, false, 1));
  MIAUDIT_RETURN_IF_ERROR(r.Int("hidden_width", c.hidden_width, false, 0));
  MIAUDIT_RETURN_IF_ERROR(r.Int("epochs", c.epochs, false, 1));
  MIAUDIT_RETURN_IF_ERROR(r.Int("batch_size", c.batch_size, false, 1));
  MIAUDIT_RETURN_IF_ERROR(r.Double("learning_rate", c.learning_rate, false));
  MIAUDIT_RETURN_IF_ERROR(
      r.Double("weight_init_scale", c.weight_init_scale, false));
  if (r.Has("clip_norm")) {
    double clip = 0.0;
    MIAUDIT_RETURN_IF_ERROR(r.Double("clip_norm", clip, true));
    c.clip_norm = clip;
  }
  if (absl::Status s = ValidateTrainConfig(c); !s.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat("[training]: ", s.message()));
  }
  return absl::OkStatus();
}

absl::Status ParseAttack(const Reader& r, AttackSection& a) {
  absl::StatusOr<std::string> kinds = r.String("kinds");
  if (!kinds.ok()) return kinds.status();
  for (absl::string_view k :
       absl::StrSplit(*kinds, ',', absl::SkipWhitespace())) {
    absl::StatusOr<AttackKind> kind =
        ParseAttackKind(absl::StripAsciiWhitespace(k));
    if (!kind.ok() || *kind == AttackKind::kL) {
      return absl::InvalidArgumentError(absl::StrCat(
          r.Name("kinds"), ": '", k, "' is not one of S, P, R, D"));
    }
    a.kinds.push_back(*kind);
  }
  if (a.kinds.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat(r.Name("kinds"), " must list at least one attack"));
  }
  a.alphas = {0.01, 0.05, 0.1, 0.3};
  if (r.Has("alphas")) {
    absl::StatusOr<std::vector<double>> alphas =
        ParseAlphaList(*r.String("alphas"));
    if (!alphas.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat(r.Name("alphas"), ": ", alphas.status().message()));
    }
    a.alphas = *std::move(alphas);
  }
  if (r.Has("method")) {
    absl::StatusOr<SmoothingMethod> m = ParseSmoothingMethod(*r.String("method"));
    if (!m.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat(r.Name("method"), ": ", m.status().message()));
    }
    a.method = *m;
  }
  a.n_shadow = a.n_reference = a.n_distilled = 20;
  a.m_per_class = 50;
  a.shadow_eval_per_class = 50;
  MIAUDIT_RETURN_IF_ERROR(r.Int("n_shadow", a.n_shadow, false, 1));
  MIAUDIT_RETURN_IF_ERROR(r.Int("n_reference", a.n_reference, false, 1));
  MIAUDIT_RETURN_IF_ERROR(r.Int("n_distilled", a.n_distilled, false, 1));
  MIAUDIT_RETURN_IF_ERROR(r.Int("m_per_class", a.m_per_class, false, 1));
  MIAUDIT_RETURN_IF_ERROR(
      r.Int("shadow_eval_per_class", a.shadow_eval_per_class, false, 1));
  MIAUDIT_RETURN_IF_ERROR(r.Int("distill_size", a.distill_size, false, 1));
  MIAUDIT_RETURN_IF_ERROR(r.Int("distill_epochs", a.distill_epochs, false, 1));
  MIAUDIT_RETURN_IF_ERROR(r.Int("nonmembers", a.nonmembers, false, 1));
  return absl::OkStatus();
}

absl::Status ParseGame(const Reader& r, GameSection& g) {
  absl::StatusOr<std::string> variant = r.String("variant");
  if (!variant.ok()) return variant.status();
  absl::StatusOr<GameVariant> v = ParseGameVariant(*variant);
  if (!v.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat(r.Name("variant"), ": ", v.status().message()));
  }
  g.variant = *v;
  MIAUDIT_RETURN_IF_ERROR(r.Int("trials", g.trials, true, 1));
  if (r.Has("adversary")) {
    absl::StatusOr<AttackKind> k = ParseAttackKind(*r.String("adversary"));
    if (!k.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat(r.Name("adversary"), ": ", k.status().message()));
    }
    g.adversary = *k;
  }
  g.adversary_models = 20;
  MIAUDIT_RETURN_IF_ERROR(
      r.Int("adversary_models", g.adversary_models, false, 1));
  MIAUDIT_RETURN_IF_ERROR(r.Double("alpha", g.alpha, false));
  if (g.alpha < 0.0 || g.alpha > 1.0) {
    return absl::InvalidArgumentError(
        absl::StrCat(r.Name("alpha"), " must lie in [0, 1]"));
  }
  return absl::OkStatus();
}

absl::Status ParseLemma1(const Reader& r, Lemma1Section& l) {
  MIAUDIT_RETURN_IF_ERROR(r.Int("pool_size", l.pool_size, false, 2));
  MIAUDIT_RETURN_IF_ERROR(r.Double("class_scale", l.class_scale, false));
  MIAUDIT_RETURN_IF_ERROR(r.Int("n", l.n, false, 1));
  MIAUDIT_RETURN_IF_ERROR(r.Double("temperature", l.temperature, false));
  MIAUDIT_RETURN_IF_ERROR(r.Int("trials", l.trials, false, 1));
  MIAUDIT_RETURN_IF_ERROR(r.Int("grid_cells", l.grid_cells, false, 1));
  MIAUDIT_RETURN_IF_ERROR(
      r.Int("importance_samples", l.importance_samples, false, 1));
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<std::vector<double>> ParseAlphaList(const std::string& text) {
  std::vector<double> out;
  for (absl::string_view part :
       absl::StrSplit(text, ',', absl::SkipWhitespace())) {
    double v = 0.0;
    if (!absl::SimpleAtod(part, &v) || !(v >= 0.0 && v <= 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("alpha '", part, "' is not a number in [0, 1]"));
    }
    out.push_back(v);
  }
  if (out.empty()) return absl::InvalidArgumentError("empty alpha list");
  return out;
}

absl::StatusOr<ExperimentConfig> ParseConfig(const std::string& text) {
  absl::StatusOr<Sections> sections = ParseIni(text);
  if (!sections.ok()) return sections.status();
  ExperimentConfig c;

  Reader seeds(*sections, "seeds");
  MIAUDIT_RETURN_IF_ERROR(seeds.Int("root", c.root_seed, true, 0));

  Reader pop(*sections, "population");
  MIAUDIT_RETURN_IF_ERROR(pop.Int("dim", c.population.dim, true, 1));
  MIAUDIT_RETURN_IF_ERROR(pop.Int("classes", c.population.classes, true, 2));
  MIAUDIT_RETURN_IF_ERROR(pop.Int("pool_size", c.population.pool_size, true, 2));
  MIAUDIT_RETURN_IF_ERROR(
      pop.Double("class_scale", c.population.class_scale, false));

  MIAUDIT_RETURN_IF_ERROR(
      ParseTraining(Reader(*sections, "training"), c.training));
  MIAUDIT_RETURN_IF_ERROR(ParseAttack(Reader(*sections, "attack"), c.attack));
  if (c.attack.distill_size == 0) {
    c.attack.distill_size = c.training.dataset_size;
  }
  if (c.attack.nonmembers == 0) c.attack.nonmembers = c.training.dataset_size;
  if (c.population.pool_size < 10 * c.training.dataset_size) {
    return absl::InvalidArgumentError(absl::StrCat(
        "population.pool_size must be at least 10 * training.dataset_size (",
        10 * c.training.dataset_size, ")"));
  }

  if (sections->count("game") > 0) {
    GameSection g;
    MIAUDIT_RETURN_IF_ERROR(ParseGame(Reader(*sections, "game"), g));
    c.game = g;
  }
  if (sections->count("lemma1") > 0) {
    Lemma1Section l;
    MIAUDIT_RETURN_IF_ERROR(ParseLemma1(Reader(*sections, "lemma1"), l));
    c.lemma1 = l;
  }
  Reader output(*sections, "output");
  if (output.Has("dir")) c.output_dir = *output.String("dir");
  c.hash = CanonicalHash(*sections);
  return c;
}

absl::StatusOr<ExperimentConfig> LoadConfig(const std::string& path) {
  absl::StatusOr<std::string> text = ReadTextFile(path);
  if (!text.ok()) return text.status();
  absl::StatusOr<ExperimentConfig> config = ParseConfig(*text);
  if (!config.ok()) {
    return absl::Status(config.status().code(),
                        absl::StrCat(path, ": ", config.status().message()));
  }
  return config;
}

}  // namespace miaudit::cli
