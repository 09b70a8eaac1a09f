// Copyright 2026 The Anaphor Lab Authors
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

#include "anaphor/config.h"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace anaphor {
namespace {

using nlohmann::json;

void Require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("config: " + what);
}

template <typename T>
void Take(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

}  // namespace

std::string_view ExperimentKindName(ExperimentKind kind) {
  return kind == ExperimentKind::kSupervised ? "supervised" : "emergent";
}

ExperimentKind ParseExperimentKind(std::string_view name) {
  if (name == "supervised") return ExperimentKind::kSupervised;
  if (name == "emergent") return ExperimentKind::kEmergent;
  throw std::invalid_argument("unknown experiment kind: " + std::string(name));
}

std::string_view ConditionName(Condition c) {
  return c == Condition::kControl ? "control" : "efficiency";
}

Condition ParseCondition(std::string_view name) {
  if (name == "control") return Condition::kControl;
  if (name == "efficiency") return Condition::kEfficiency;
  throw std::invalid_argument("unknown condition: " + std::string(name));
}

ExperimentConfig ExperimentConfig::Defaults(ExperimentKind kind) {
  ExperimentConfig cfg;
  cfg.kind = kind;
  if (kind == ExperimentKind::kEmergent) {
    cfg.name = "emergent";
    cfg.condition = Condition::kEfficiency;
    cfg.alpha = 0.15;
    cfg.receiver_hidden = 250;
    cfg.receiver_lr = 0.001;
    cfg.batch_size = 512;
  } else {
    cfg.name = "supervised";
  }
  return cfg;
}

Vocabulary ExperimentConfig::MakeVocabulary() const {
  return Vocabulary::WithSizes(num_subjects, num_verbs);
}

void ExperimentConfig::Validate() const {
  Require(!name.empty(), "name must be non-empty");
  Require(num_subjects >= 1 && num_verbs >= 1, "vocabulary sizes must be >= 1");
  if (subsample_size) {
    int64_t space = static_cast<int64_t>(num_subjects) * num_verbs * num_subjects *
                    num_verbs;
    Require(*subsample_size >= 2 && *subsample_size <= space,
            "subsample_size must lie in [2, |meaning space|]");
  }
  Require(test_fraction > 0.0 && test_fraction < 1.0,
          "test_fraction must lie in (0, 1)");
  Require(!languages.empty(), "languages must be non-empty");
  Require(epochs >= 1, "epochs must be >= 1");
  Require(interactions >= 1, "interactions must be >= 1");
  Require(log_every >= 1, "log_every must be >= 1");
  Require(alpha >= 0.0, "alpha must be >= 0");
  Require((condition == Condition::kControl) == (alpha == 0.0),
          "alpha must be 0 exactly when condition is control");
  Require(entropy_coeff >= 0.0, "entropy_coeff must be >= 0");
  Require(max_len >= 1, "max_len must be >= 1");
  Require(alphabet_size >= 1 && alphabet_size <= 255,
          "alphabet_size must lie in [1, 255]");
  Require(sender_hidden >= 1 && receiver_hidden >= 1, "hidden sizes must be >= 1");
  Require(sender_lr > 0.0 && receiver_lr > 0.0, "learning rates must be > 0");
  Require(batch_size >= 1, "batch_size must be >= 1");
  Require(!seeds.empty(), "seeds must be non-empty");
  Require(std::set<uint64_t>(seeds.begin(), seeds.end()).size() == seeds.size(),
          "seeds must be distinct");
  Require(su_sample_size >= 1 && su_resamples >= 1, "SU parameters must be >= 1");
  Require(!output_dir.empty(), "output_dir must be non-empty");
}

nlohmann::json ExperimentConfig::ToJson() const {
  json langs = json::array();
  for (Language l : languages) langs.push_back(std::string(LanguageName(l)));
  json j = {
      {"experiment", std::string(ExperimentKindName(kind))},
      {"name", name},
      {"num_subjects", num_subjects},
      {"num_verbs", num_verbs},
      {"subsample_size", subsample_size ? json(*subsample_size) : json(nullptr)},
      {"test_fraction", test_fraction},
      {"languages", langs},
      {"codebook_mode", std::string(CodebookModeName(codebook_mode))},
      {"epochs", epochs},
      {"condition", std::string(ConditionName(condition))},
      {"alpha", alpha},
      {"interactions", interactions},
      {"entropy_coeff", entropy_coeff},
      {"sender_hidden", sender_hidden},
      {"sender_lr", sender_lr},
      {"log_every", log_every},
      {"max_len", max_len},
      {"alphabet_size", alphabet_size},
      {"receiver_hidden", receiver_hidden},
      {"receiver_lr", receiver_lr},
      {"batch_size", batch_size},
      {"seeds", seeds},
      {"su_sample_size", su_sample_size},
      {"su_resamples", su_resamples},
      {"output_dir", output_dir},
  };
  return j;
}

ExperimentConfig ExperimentConfig::FromJson(const nlohmann::json& j) {
  Require(j.is_object(), "expected a JSON object");
  Require(j.contains("experiment"), "missing key 'experiment'");
  ExperimentConfig cfg =
      Defaults(ParseExperimentKind(j.at("experiment").get<std::string>()));
  const json known = cfg.ToJson();
  for (const auto& item : j.items()) {
    Require(known.contains(item.key()), "unknown key '" + item.key() + "'");
  }
  try {
    Take(j, "name", cfg.name);
    Take(j, "num_subjects", cfg.num_subjects);
    Take(j, "num_verbs", cfg.num_verbs);
    if (j.contains("subsample_size")) {
      const json& s = j.at("subsample_size");
      cfg.subsample_size =
          s.is_null() ? std::nullopt : std::optional<int64_t>(s.get<int64_t>());
    }
    Take(j, "test_fraction", cfg.test_fraction);
    if (j.contains("languages")) {
      cfg.languages.clear();
      for (const auto& l : j.at("languages")) {
        cfg.languages.push_back(ParseLanguage(l.get<std::string>()));
      }
    }
    if (j.contains("codebook_mode")) {
      cfg.codebook_mode = ParseCodebookMode(j.at("codebook_mode").get<std::string>());
    }
    Take(j, "epochs", cfg.epochs);
    if (j.contains("condition")) {
      cfg.condition = ParseCondition(j.at("condition").get<std::string>());
      // A bare condition switch implies its alpha.
      if (!j.contains("alpha")) {
        cfg.alpha = cfg.condition == Condition::kControl ? 0.0 : 0.15;
      }
    }
    Take(j, "alpha", cfg.alpha);
    Take(j, "interactions", cfg.interactions);
    Take(j, "entropy_coeff", cfg.entropy_coeff);
    Take(j, "sender_hidden", cfg.sender_hidden);
    Take(j, "sender_lr", cfg.sender_lr);
    Take(j, "log_every", cfg.log_every);
    Take(j, "max_len", cfg.max_len);
    Take(j, "alphabet_size", cfg.alphabet_size);
    Take(j, "receiver_hidden", cfg.receiver_hidden);
    Take(j, "receiver_lr", cfg.receiver_lr);
    Take(j, "batch_size", cfg.batch_size);
    Take(j, "seeds", cfg.seeds);
    Take(j, "su_sample_size", cfg.su_sample_size);
    Take(j, "su_resamples", cfg.su_resamples);
    Take(j, "output_dir", cfg.output_dir);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  cfg.Validate();
  return cfg;
}

std::string ExperimentConfig::Hash() const {
  json j = ToJson();
  j.erase("seeds");
  j.erase("output_dir");
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(Fnv1a64(j.dump())));
  return buf;
}

std::string DumpJson(const nlohmann::json& j) { return j.dump(2) + "\n"; }

ExperimentConfig ReadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config " + path + ": " + e.what());
  }
  return ExperimentConfig::FromJson(j);
}

void WriteConfig(const ExperimentConfig& cfg, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << DumpJson(cfg.ToJson());
}

uint64_t Fnv1a64(std::string_view bytes) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace anaphor
