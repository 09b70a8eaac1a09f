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

#ifndef ANAPHOR_HARNESS_H_
#define ANAPHOR_HARNESS_H_

// Experiment orchestration: supervised Receiver training on the handcrafted
// languages, joint Sender/Receiver training, metric reports, run artifacts
// and the aggregate tables and figure data.
//
// Run layout under cfg.output_dir:
//   runs/<config-hash>/<seed>/config.json     materialized config
//   runs/<config-hash>/<seed>/steps.jsonl     one JSON object per logged step
//   runs/<config-hash>/<seed>/checkpoint.bin  final parameters
//   runs/<config-hash>/<seed>/corpus*.csv     signals the metrics were run on
//   runs/<config-hash>/<seed>/report.json     metric report
//   runs/<config-hash>/<seed>/run.json        run record (wall clock etc.)
//   summary/<name>.csv, summary/<name>.json   per-run rows and statistics

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "anaphor/agents.h"
#include "anaphor/config.h"
#include "anaphor/handcrafted.h"
#include "anaphor/meanings.h"
#include "anaphor/metrics.h"
#include "json.hpp"

namespace anaphor {

inline constexpr const char* kCodeVersion = "anaphor 1.0.0";

// Independent generator streams of one run.
enum class Stream : uint64_t { kInit = 1, kTrain = 2, kMetrics = 3 };
Rng StreamRng(uint64_t seed, Stream stream);

// Meaning space of a run: the full cross product, or its seeded subsample.
std::vector<Meaning> RunMeanings(const ExperimentConfig& cfg, uint64_t seed);

struct RunRecord {
  std::string config_hash;
  uint64_t seed = 0;
  std::string run_dir;
  std::string steps_path;
  std::string checkpoint_path;
  std::string report_path;
  nlohmann::json report;
  double wall_clock_seconds = 0.0;
  std::string code_version = kCodeVersion;

  // "<config-hash>/<seed>".
  std::string RunId() const;
  bool failed() const { return report.contains("failure"); }
  nlohmann::json ToJson() const;
};

std::string RunDir(const ExperimentConfig& cfg, uint64_t seed);

// Metric block for a corpus: SU at n = 1..3, mean lengths per group and,
// with a Receiver, accuracy on the train/test split of the run and
// predictive ambiguity per class and role. A pure function of its inputs.
nlohmann::json AnalyzeCorpus(const SignalCorpus& corpus,
                             const ReceiverParams* receiver,
                             const ExperimentConfig& cfg, uint64_t seed);

// Recomputes a stored report from artifacts. Emergent runs yield the whole
// report.json; supervised runs yield the metric block of `language`. A
// checkpoint path may be empty for a bare corpus (SU and lengths only).
// Throws std::invalid_argument on an empty or malformed corpus and
// std::runtime_error on a missing checkpoint.
nlohmann::json Analyze(const std::string& corpus_path,
                       const std::string& checkpoint_path,
                       const ExperimentConfig& cfg, uint64_t seed,
                       std::optional<Language> language = std::nullopt);

// One seed of the supervised experiment: every configured language is
// trained in lockstep from identical initial weights until all of them are
// at 100% test accuracy on the same epoch (or cfg.epochs run out). Predictive
// ambiguity is read at that epoch.
RunRecord RunSupervisedSeed(const ExperimentConfig& cfg, uint64_t seed);

// One seed of the joint game. A non-finite loss ends the run with a
// "failure" entry in the report.
RunRecord RunEmergentSeed(const ExperimentConfig& cfg, uint64_t seed);

// All seeds, then summary/<name>.{csv,json}.
std::vector<RunRecord> RunExperiment(const ExperimentConfig& cfg);

// Loads the stored records of every seed of cfg.
std::vector<RunRecord> LoadRecords(const ExperimentConfig& cfg);

// Epochs to 100% per language (mean, CI, runs that never converged), pairwise
// t-tests, and PA comparisons at the common perfect epoch.
nlohmann::json SummarizeSupervised(const ExperimentConfig& cfg,
                                   std::span<const RunRecord> records);
// Per-condition means and CIs of accuracy, SU and lengths.
nlohmann::json SummarizeEmergent(const ExperimentConfig& cfg,
                                 std::span<const RunRecord> records);
// Control vs +Efficiency t-tests on the per-run values.
nlohmann::json CompareConditions(std::span<const RunRecord> control,
                                 std::span<const RunRecord> efficiency);

std::string RunsCsv(const ExperimentConfig& cfg, std::span<const RunRecord> records);

// Columns: panel,position,role,series,pa_mean,ci_half_width,n,
// omitted_in_figure,run_ids. Positions 1, 2, 4, 5 per panel and series, plus
// the conj position flagged with omitted_in_figure = 1.
std::string Figure4Csv(std::span<const RunRecord> records);
std::string Figure5Csv(std::span<const RunRecord> control,
                       std::span<const RunRecord> efficiency);

void WriteTextFile(const std::string& path, const std::string& text);
std::string ReadTextFile(const std::string& path);

}  // namespace anaphor

#endif  // ANAPHOR_HARNESS_H_
