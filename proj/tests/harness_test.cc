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

#include "anaphor/harness.h"

#include <filesystem>
#include <sstream>
#include <stdexcept>
#include <string>

#include "gtest/gtest.h"

namespace anaphor {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string FreshDir(const std::string& name) {
  fs::path p = fs::path(::testing::TempDir()) / ("anaphor_harness_" + name);
  fs::remove_all(p);
  return p.string();
}

ExperimentConfig TinySupervised(const std::string& out) {
  ExperimentConfig c = ExperimentConfig::Defaults(ExperimentKind::kSupervised);
  c.name = "tiny_supervised";
  c.num_subjects = 3;
  c.num_verbs = 3;
  c.alphabet_size = 12;
  c.receiver_hidden = 8;
  c.receiver_lr = 0.01;
  c.batch_size = 8;
  c.epochs = 3;
  c.test_fraction = 0.2;
  c.seeds = {0, 1};
  c.su_sample_size = 10;
  c.su_resamples = 3;
  c.output_dir = out;
  return c;
}

ExperimentConfig TinyEmergent(const std::string& out) {
  ExperimentConfig c = ExperimentConfig::Defaults(ExperimentKind::kEmergent);
  c.name = "tiny_emergent";
  c.num_subjects = 3;
  c.num_verbs = 3;
  c.max_len = 3;
  c.alphabet_size = 5;
  c.sender_hidden = 8;
  c.receiver_hidden = 8;
  c.batch_size = 16;
  c.interactions = 30;
  c.log_every = 10;
  c.seeds = {4};
  c.su_sample_size = 10;
  c.su_resamples = 3;
  c.output_dir = out;
  return c;
}

int CountLines(const std::string& text) {
  int n = 0;
  for (char ch : text) n += ch == '\n';
  return n;
}

TEST(HarnessTest, RunDirLayout) {
  ExperimentConfig c = TinyEmergent("/x");
  EXPECT_EQ(RunDir(c, 7), "/x/runs/" + c.Hash() + "/7");
}

TEST(HarnessTest, SupervisedRunWritesArtifacts) {
  ExperimentConfig c = TinySupervised(FreshDir("sup"));
  RunRecord r = RunSupervisedSeed(c, 0);
  for (const char* f : {"config.json", "steps.jsonl", "checkpoint.bin", "report.json",
                        "run.json", "codebook.json", "corpus_pronoun.csv"}) {
    EXPECT_TRUE(fs::exists(fs::path(r.run_dir) / f)) << f;
  }
  EXPECT_EQ(ReadConfig(r.run_dir + "/config.json").Hash(), c.Hash());
  const json& rep = r.report;
  EXPECT_EQ(rep.at("run").at("config_hash"), c.Hash());
  EXPECT_EQ(rep.at("metrics").size(), 3u);
  // One line per epoch and language.
  EXPECT_EQ(CountLines(ReadTextFile(r.steps_path)), 3 * rep.at("epochs_run").get<int>());
}

TEST(HarnessTest, SupervisedAnalyzeMatchesReport) {
  ExperimentConfig c = TinySupervised(FreshDir("sup_an"));
  RunRecord r = RunSupervisedSeed(c, 1);
  for (Language lang : kAllLanguages) {
    const std::string name(LanguageName(lang));
    json again = Analyze(r.run_dir + "/corpus_" + name + ".csv", r.checkpoint_path, c, 1, lang);
    EXPECT_EQ(DumpJson(again), DumpJson(r.report.at("metrics").at(name))) << name;
  }
}

TEST(HarnessTest, SupervisedIsDeterministic) {
  ExperimentConfig a = TinySupervised(FreshDir("det_a"));
  ExperimentConfig b = TinySupervised(FreshDir("det_b"));
  RunRecord ra = RunSupervisedSeed(a, 0);
  RunRecord rb = RunSupervisedSeed(b, 0);
  EXPECT_EQ(ReadTextFile(ra.steps_path), ReadTextFile(rb.steps_path));
  EXPECT_EQ(ReadTextFile(ra.report_path), ReadTextFile(rb.report_path));
  EXPECT_EQ(ReadTextFile(ra.checkpoint_path), ReadTextFile(rb.checkpoint_path));
}

TEST(HarnessTest, EmergentRunAnalyzeAndDeterminism) {
  ExperimentConfig a = TinyEmergent(FreshDir("em_a"));
  ExperimentConfig b = TinyEmergent(FreshDir("em_b"));
  RunRecord ra = RunEmergentSeed(a, 4);
  RunRecord rb = RunEmergentSeed(b, 4);
  ASSERT_FALSE(ra.failed());
  EXPECT_EQ(ReadTextFile(ra.steps_path), ReadTextFile(rb.steps_path));
  EXPECT_EQ(ReadTextFile(ra.report_path), ReadTextFile(rb.report_path));
  EXPECT_EQ(CountLines(ReadTextFile(ra.steps_path)), 3);
  json line = json::parse(ReadTextFile(ra.steps_path).substr(0, ReadTextFile(ra.steps_path).find('\n')));
  for (const char* k : {"step", "loss_s", "loss_r", "acc", "mean_len"}) {
    EXPECT_TRUE(line.contains(k)) << k;
  }
  json again = Analyze(ra.run_dir + "/corpus.csv", ra.checkpoint_path, a, 4);
  EXPECT_EQ(DumpJson(again), ReadTextFile(ra.report_path));
  const json& m = ra.report.at("metrics");
  for (const char* k : {"su", "mean_length", "accuracy", "pa"}) EXPECT_TRUE(m.contains(k)) << k;
}

TEST(HarnessTest, AnalyzeErrors) {
  const std::string dir = FreshDir("errors");
  fs::create_directories(dir);
  const std::string empty = dir + "/empty.csv";
  WriteTextFile(empty, "subj1,verb1,conj,subj2,verb2,signal,class\n");
  ExperimentConfig c = TinyEmergent(dir);
  EXPECT_THROW(Analyze(empty, "", c, 0), std::invalid_argument);
  RunRecord r = RunEmergentSeed(c, 4);
  EXPECT_THROW(Analyze(r.run_dir + "/corpus.csv", dir + "/missing.bin", c, 4),
               std::runtime_error);
}

TEST(HarnessTest, ExperimentSummaryAndFigures) {
  ExperimentConfig c = TinySupervised(FreshDir("exp"));
  std::vector<RunRecord> recs = RunExperiment(c);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_TRUE(fs::exists(fs::path(c.output_dir) / "summary" / "tiny_supervised.csv"));
  std::vector<RunRecord> loaded = LoadRecords(c);
  ASSERT_EQ(loaded.size(), 2u);
  EXPECT_EQ(loaded[1].report, recs[1].report);

  json s = SummarizeSupervised(c, loaded);
  EXPECT_EQ(s.at("epoch_ttests").size(), 3u);
  EXPECT_TRUE(s.at("epochs_to_perfect").contains("prodrop"));

  // The tiny runs rarely converge; mark a common perfect epoch so that every
  // run contributes to the figure.
  for (RunRecord& r : loaded) r.report["pa_epoch"] = 3;
  std::string fig4 = Figure4Csv(loaded);
  std::istringstream in(fig4);
  std::string line;
  std::getline(in, line);
  int rows = 0, shown = 0;
  while (std::getline(in, line)) {
    ++rows;
    // omitted_in_figure is the eighth column.
    std::istringstream cells(line);
    std::string cell;
    for (int i = 0; i < 8; ++i) std::getline(cells, cell, ',');
    shown += cell == "0";
  }
  EXPECT_EQ(rows, 3 * 5 * 3);
  EXPECT_EQ(shown, 3 * 4 * 3);
  EXPECT_NE(fig4.find(loaded[0].RunId() + ";" + loaded[1].RunId()), std::string::npos);
  EXPECT_EQ(Figure4Csv(loaded), fig4);
}

TEST(HarnessTest, Figure5HasBothConditions) {
  ExperimentConfig e = TinyEmergent(FreshDir("fig5"));
  ExperimentConfig k = e;
  k.condition = Condition::kControl;
  k.alpha = 0.0;
  k.seeds = {4, 5};
  e.seeds = {4, 5};
  std::vector<RunRecord> eff = RunExperiment(e);
  std::vector<RunRecord> ctl = RunExperiment(k);
  std::string csv = Figure5Csv(ctl, eff);
  EXPECT_EQ(CountLines(csv), 1 + 3 * 5 * 2);
  EXPECT_NE(csv.find(",control,"), std::string::npos);
  EXPECT_NE(csv.find(",efficiency,"), std::string::npos);
  json cmp = CompareConditions(ctl, eff);
  EXPECT_TRUE(cmp.at("length_all").contains("control_mean"));
  EXPECT_NE(csv.find(ctl[0].RunId()), std::string::npos);
}

}  // namespace
}  // namespace anaphor
