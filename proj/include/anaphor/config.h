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

#ifndef ANAPHOR_CONFIG_H_
#define ANAPHOR_CONFIG_H_

// Experiment configuration. Every hyperparameter is an explicit JSON key;
// parsing fills absent keys from the defaults of the experiment kind, so the
// stored config always lists the values a run actually used.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "anaphor/handcrafted.h"
#include "anaphor/meanings.h"
#include "anaphor/metrics.h"
#include "anaphor/signal.h"
#include "json.hpp"

namespace anaphor {

enum class ExperimentKind { kSupervised, kEmergent };
enum class Condition { kControl, kEfficiency };

std::string_view ExperimentKindName(ExperimentKind kind);
ExperimentKind ParseExperimentKind(std::string_view name);
std::string_view ConditionName(Condition c);
Condition ParseCondition(std::string_view name);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kSupervised;
  std::string name = "experiment";

  int num_subjects = 15;
  int num_verbs = 15;
  // Uniform seeded restriction of the meaning space; nullopt keeps all of it.
  std::optional<int64_t> subsample_size;
  double test_fraction = 0.1;

  // Supervised: languages trained side by side, and the codebook family.
  std::vector<Language> languages = {Language::kNoElision, Language::kPronoun,
                                     Language::kProdrop};
  CodebookMode codebook_mode = CodebookMode::kPrefixFree;
  int epochs = 50;

  // Emergent.
  Condition condition = Condition::kControl;
  double alpha = 0.0;
  int interactions = 3000;
  double entropy_coeff = 0.01;
  int sender_hidden = 250;
  double sender_lr = 0.001;
  int log_every = 50;

  int max_len = 10;
  int alphabet_size = 26;
  int receiver_hidden = 64;
  double receiver_lr = 5e-4;
  int batch_size = 32;

  std::vector<uint64_t> seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  int su_sample_size = 500;
  int su_resamples = 20;

  std::string output_dir = "runs";

  static ExperimentConfig Defaults(ExperimentKind kind);

  Vocabulary MakeVocabulary() const;
  Alphabet MakeAlphabet() const { return Alphabet{alphabet_size}; }
  SuOptions MakeSuOptions() const { return SuOptions{su_sample_size, su_resamples}; }

  // Throws std::invalid_argument. Enforces alpha == 0 iff Control.
  void Validate() const;

  nlohmann::json ToJson() const;
  // Missing keys take Defaults(kind); unknown keys are rejected. The result
  // is validated.
  static ExperimentConfig FromJson(const nlohmann::json& j);

  // 16 hex digits of FNV-1a over the canonical JSON, excluding the seed list
  // and output directory, so (hash, seed) names one run.
  std::string Hash() const;
};

// Two-space indented JSON with a trailing newline; keys sorted.
std::string DumpJson(const nlohmann::json& j);

ExperimentConfig ReadConfig(const std::string& path);
void WriteConfig(const ExperimentConfig& cfg, const std::string& path);

uint64_t Fnv1a64(std::string_view bytes);

}  // namespace anaphor

#endif  // ANAPHOR_CONFIG_H_
