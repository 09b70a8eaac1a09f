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

// Command-line front end: gen-language, train-receiver, train-agents,
// analyze, report. Results go to stdout as JSON; failures print
// {"error": {...}} and exit nonzero.

#include <filesystem>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "anaphor/config.h"
#include "anaphor/handcrafted.h"
#include "anaphor/harness.h"
#include "anaphor/meanings.h"
#include "anaphor/metrics.h"
#include "json.hpp"

namespace {

using anaphor::ExperimentConfig;
using anaphor::ExperimentKind;
using nlohmann::json;
namespace fs = std::filesystem;

// Flags shared by the config-driven verbs. Each one overrides the matching
// config key.
struct Overrides {
  std::string config_path;
  std::optional<uint64_t> seed;
  std::string condition;
  std::string language;
  std::string out;
  std::vector<std::string> sets;

  void Attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "experiment config (JSON)");
    cmd->add_option("--seed", seed, "run this seed only");
    cmd->add_option("--out", out, "output directory");
    cmd->add_option("--set", sets, "override a config key: key=<json value>");
  }

  ExperimentConfig Resolve(ExperimentKind kind) const {
    json j = config_path.empty()
                 ? ExperimentConfig::Defaults(kind).ToJson()
                 : anaphor::ReadConfig(config_path).ToJson();
    if (j.at("experiment") != std::string(anaphor::ExperimentKindName(kind))) {
      throw std::invalid_argument("config is not a " +
                                  std::string(anaphor::ExperimentKindName(kind)) +
                                  " experiment");
    }
    for (const std::string& s : sets) {
      auto eq = s.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value");
      std::string key = s.substr(0, eq);
      std::string value = s.substr(eq + 1);
      try {
        j[key] = json::parse(value);
      } catch (const json::parse_error&) {
        j[key] = value;  // bare strings
      }
    }
    if (seed) j["seeds"] = {*seed};
    if (!condition.empty()) {
      j["condition"] = condition;
      j["alpha"] = anaphor::ParseCondition(condition) == anaphor::Condition::kControl
                       ? 0.0
                       : ExperimentConfig::Defaults(ExperimentKind::kEmergent).alpha;
    }
    if (!language.empty()) j["languages"] = {language};
    if (!out.empty()) j["output_dir"] = out;
    return ExperimentConfig::FromJson(j);
  }
};

json RecordsJson(const std::vector<anaphor::RunRecord>& records) {
  json runs = json::array();
  for (const auto& r : records) runs.push_back(r.ToJson());
  return runs;
}

void Print(const json& j) { std::cout << anaphor::DumpJson(j); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anaphoric structure in the reconstruction game"};
  app.require_subcommand(1);

  // gen-language
  auto* gen = app.add_subcommand("gen-language", "encode the meaning space");
  std::string gen_language = "no_elision", gen_out = ".", gen_codebook, gen_mode;
  Overrides gen_over;
  gen->add_option("--language", gen_language, "no_elision|pronoun|prodrop");
  gen->add_option("--codebook", gen_codebook, "codebook file to use instead of a generated one");
  gen->add_option("--codebook-mode", gen_mode, "prefix_free|overlapping");
  gen->add_option("--config", gen_over.config_path, "supervised config (vocabulary, alphabet)");
  gen->add_option("--seed", gen_over.seed, "codebook and subsample seed");
  gen->add_option("--set", gen_over.sets, "override a config key: key=<json value>");
  gen->add_option("--out", gen_out, "output directory");

  // train-receiver
  auto* recv = app.add_subcommand("train-receiver", "supervised Receiver training");
  Overrides recv_over;
  recv_over.Attach(recv);
  recv->add_option("--language", recv_over.language, "train on one language only");

  // train-agents
  auto* agents = app.add_subcommand("train-agents", "joint Sender/Receiver training");
  Overrides agents_over;
  agents_over.Attach(agents);
  agents->add_option("--condition", agents_over.condition, "efficiency|control");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "recompute metrics from artifacts");
  std::string an_corpus, an_checkpoint, an_language, an_kind = "emergent", an_out;
  Overrides an_over;
  analyze->add_option("--corpus", an_corpus, "corpus CSV")->required();
  analyze->add_option("--checkpoint", an_checkpoint, "checkpoint.bin (optional)");
  analyze->add_option("--config", an_over.config_path, "config of the run");
  analyze->add_option("--experiment", an_kind, "supervised|emergent when no config is given");
  analyze->add_option("--seed", an_over.seed, "run seed")->default_val(0);
  analyze->add_option("--language", an_language, "language block of a supervised run");
  analyze->add_option("--set", an_over.sets, "override a config key: key=<json value>");
  analyze->add_option("--out", an_out, "write the report here instead of stdout");

  // report
  auto* rep = app.add_subcommand("report", "aggregate stored runs");
  std::vector<std::string> rep_configs;
  std::string rep_out;
  rep->add_option("--config", rep_configs, "config(s) whose runs to aggregate")
      ->required();
  rep->add_option("--out", rep_out, "output directory (default: first config's)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    Print({{"error", {{"type", "usage"}, {"message", e.what()}}}});
    return 2;
  }

  try {
    if (*gen) {
      ExperimentConfig cfg = gen_over.Resolve(ExperimentKind::kSupervised);
      if (!gen_mode.empty()) cfg.codebook_mode = anaphor::ParseCodebookMode(gen_mode);
      const uint64_t seed = cfg.seeds.front();
      anaphor::CodebookFile cb;
      if (!gen_codebook.empty()) {
        cb = anaphor::ReadCodebookFile(gen_codebook);
      } else {
        cb.vocab = cfg.MakeVocabulary();
        cb.codebook = anaphor::BuildCodebook(cb.vocab, cfg.MakeAlphabet(), seed,
                                             cfg.codebook_mode);
      }
      const anaphor::Language lang = anaphor::ParseLanguage(gen_language);
      std::vector<anaphor::Meaning> meanings = anaphor::EnumerateMeanings(cb.vocab);
      if (gen_codebook.empty() && cfg.subsample_size) {
        meanings = anaphor::SubsampleMeanings(
            meanings, static_cast<size_t>(*cfg.subsample_size), seed);
      }
      fs::create_directories(gen_out);
      const std::string corpus_path = (fs::path(gen_out) / (gen_language + ".csv")).string();
      const std::string codebook_path = (fs::path(gen_out) / "codebook.json").string();
      anaphor::WriteCorpusCsv(
          anaphor::SignalCorpus::FromPairs(gen_language,
                                           anaphor::GenerateLanguage(lang, meanings, cb.codebook)),
          corpus_path);
      anaphor::WriteCodebookFile(cb, codebook_path);
      Print({{"corpus", corpus_path}, {"codebook", codebook_path},
             {"meanings", meanings.size()}});
    } else if (*recv) {
      ExperimentConfig cfg = recv_over.Resolve(ExperimentKind::kSupervised);
      auto records = anaphor::RunExperiment(cfg);
      Print({{"config_hash", cfg.Hash()},
             {"runs", RecordsJson(records)},
             {"summary", anaphor::SummarizeSupervised(cfg, records)}});
    } else if (*agents) {
      ExperimentConfig cfg = agents_over.Resolve(ExperimentKind::kEmergent);
      auto records = anaphor::RunExperiment(cfg);
      Print({{"config_hash", cfg.Hash()},
             {"runs", RecordsJson(records)},
             {"summary", anaphor::SummarizeEmergent(cfg, records)}});
    } else if (*analyze) {
      ExperimentConfig cfg =
          an_over.config_path.empty()
              ? an_over.Resolve(anaphor::ParseExperimentKind(an_kind))
              : [&] {
                  ExperimentConfig c = anaphor::ReadConfig(an_over.config_path);
                  Overrides o = an_over;
                  o.seed.reset();
                  return o.Resolve(c.kind);
                }();
      std::optional<anaphor::Language> lang;
      if (!an_language.empty()) lang = anaphor::ParseLanguage(an_language);
      json report = anaphor::Analyze(an_corpus, an_checkpoint, cfg, *an_over.seed, lang);
      if (an_out.empty()) {
        Print(report);
      } else {
        anaphor::WriteTextFile(an_out, anaphor::DumpJson(report));
        Print({{"report", an_out}});
      }
    } else if (*rep) {
      std::vector<ExperimentConfig> cfgs;
      for (const auto& p : rep_configs) cfgs.push_back(anaphor::ReadConfig(p));
      const fs::path out =
          fs::path(rep_out.empty() ? cfgs.front().output_dir : rep_out) / "summary";
      fs::create_directories(out);
      json result = json::object();
      std::vector<anaphor::RunRecord> control, efficiency;
      for (const auto& cfg : cfgs) {
        auto records = anaphor::LoadRecords(cfg);
        anaphor::WriteTextFile((out / (cfg.name + ".csv")).string(),
                               anaphor::RunsCsv(cfg, records));
        json summary;
        if (cfg.kind == ExperimentKind::kSupervised) {
          summary = anaphor::SummarizeSupervised(cfg, records);
          anaphor::WriteTextFile((out / (cfg.name + "_figure4.csv")).string(),
                                 anaphor::Figure4Csv(records));
        } else {
          summary = anaphor::SummarizeEmergent(cfg, records);
          auto& bucket = cfg.condition == anaphor::Condition::kControl ? control : efficiency;
          bucket.insert(bucket.end(), records.begin(), records.end());
        }
        anaphor::WriteTextFile((out / (cfg.name + ".json")).string(),
                               anaphor::DumpJson(summary));
        result[cfg.name] = summary;
      }
      if (!control.empty() && !efficiency.empty()) {
        json cmp = anaphor::CompareConditions(control, efficiency);
        anaphor::WriteTextFile((out / "conditions.json").string(), anaphor::DumpJson(cmp));
        anaphor::WriteTextFile((out / "figure5.csv").string(),
                               anaphor::Figure5Csv(control, efficiency));
        result["conditions"] = cmp;
      }
      Print(result);
    }
  } catch (const std::invalid_argument& e) {
    Print({{"error", {{"type", "invalid_argument"}, {"message", e.what()}}}});
    return 2;
  } catch (const std::exception& e) {
    Print({{"error", {{"type", "runtime_error"}, {"message", e.what()}}}});
    return 1;
  }
  return 0;
}
