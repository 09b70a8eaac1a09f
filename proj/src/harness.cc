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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "anaphor/checkpoint.h"
#include "anaphor/stats.h"
#include "anaphor/tensor.h"

namespace anaphor {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr RedundancyClass kFigurePanels[] = {RedundancyClass::kNonRedundant,
                                             RedundancyClass::kRedundantSubject,
                                             RedundancyClass::kRedundantVerb};
constexpr RedundancyClass kAllClasses[] = {
    RedundancyClass::kNonRedundant, RedundancyClass::kRedundantSubject,
    RedundancyClass::kRedundantVerb, RedundancyClass::kFullyRedundant};
constexpr Role kFigureRoles[] = {Role::kSubj1, Role::kVerb1, Role::kSubj2,
                                 Role::kVerb2};

std::string Str(std::string_view s) { return std::string(s); }

std::string FormatNumber(double x) {
  if (!std::isfinite(x)) return "";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

json RunHeader(const ExperimentConfig& cfg, uint64_t seed) {
  json h = {{"experiment", Str(ExperimentKindName(cfg.kind))},
            {"name", cfg.name},
            {"config_hash", cfg.Hash()},
            {"seed", seed},
            {"code_version", kCodeVersion}};
  if (cfg.kind == ExperimentKind::kEmergent) {
    h["condition"] = Str(ConditionName(cfg.condition));
    h["alpha"] = cfg.alpha;
  }
  return h;
}

class JsonlWriter {
 public:
  explicit JsonlWriter(const std::string& path)
      : out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw std::runtime_error("cannot write " + path);
  }
  void Write(const json& j) { out_ << j.dump() << '\n'; }

 private:
  std::ofstream out_;
};

ReceiverParams LoadReceiver(const ParamStore& stored, const ExperimentConfig& cfg) {
  Rng unused(0);
  ReceiverParams p = ReceiverParams::Init(cfg.MakeVocabulary(), cfg.MakeAlphabet(),
                                          cfg.receiver_hidden, unused);
  RestoreStore(stored, p.store);
  return p;
}

std::string ReceiverStoreName(Language lang) {
  return "receiver." + Str(LanguageName(lang));
}

std::string CorpusFileName(std::optional<Language> lang) {
  return lang ? "corpus_" + Str(LanguageName(*lang)) + ".csv" : "corpus.csv";
}

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since)
      .count();
}

json TTestJson(std::span<const double> xs, std::span<const double> ys) {
  try {
    StatResult r = TwoSampleT(xs, ys);
    return {{"t", r.statistic},
            {"df", r.df},
            {"p_two_sided", r.p_value},
            {"p_greater", OneSidedPGreater(r)},
            {"mean_difference", r.mean_difference}};
  } catch (const std::exception& e) {
    return {{"error", e.what()}};
  }
}

json IntervalJson(std::span<const double> xs) {
  json j = {{"n", xs.size()}};
  if (xs.empty()) return j;
  j["mean"] = Mean(xs);
  if (xs.size() >= 2) j["ci_half_width"] = Ci95(xs).half_width;
  return j;
}

std::string JoinIds(const std::vector<std::string>& ids) {
  std::string out;
  for (size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ';';
    out += ids[i];
  }
  return out;
}

// Collects one PA value per run for every panel and role; the key is
// (panel, role).
using PaSeries = std::map<std::pair<int, int>, std::vector<double>>;

void AppendFigureRows(std::ostringstream& os, const std::string& series,
                      const PaSeries& values, const std::vector<std::string>& ids) {
  for (RedundancyClass panel : kFigurePanels) {
    for (Role role : kAllRoles) {
      auto it = values.find({static_cast<int>(panel), static_cast<int>(role)});
      std::vector<double> xs = it == values.end() ? std::vector<double>{} : it->second;
      Interval iv{};
      if (xs.size() >= 2) iv = Ci95(xs);
      else if (xs.size() == 1) iv.mean = xs[0];
      os << RedundancyClassName(panel) << ',' << static_cast<int>(role) + 1 << ','
         << RoleName(role) << ',' << series << ','
         << (xs.empty() ? "" : FormatNumber(iv.mean)) << ','
         << (xs.size() >= 2 ? FormatNumber(iv.half_width) : "") << ','
         << xs.size() << ',' << (role == Role::kConj ? 1 : 0) << ','
         << JoinIds(ids) << '\n';
    }
  }
}

void CollectPa(const json& metrics, PaSeries& out) {
  const json& pa = metrics.at("pa");
  for (RedundancyClass panel : kFigurePanels) {
    for (Role role : kAllRoles) {
      out[{static_cast<int>(panel), static_cast<int>(role)}].push_back(
          pa.at(Str(RedundancyClassName(panel))).at(Str(RoleName(role))).get<double>());
    }
  }
}

constexpr const char* kFigureHeader =
    "panel,position,role,series,pa_mean,ci_half_width,n,omitted_in_figure,run_ids\n";

}  // namespace

Rng StreamRng(uint64_t seed, Stream stream) {
  Rng root(seed);
  return root.Fork(static_cast<uint64_t>(stream));
}

std::vector<Meaning> RunMeanings(const ExperimentConfig& cfg, uint64_t seed) {
  std::vector<Meaning> all = EnumerateMeanings(cfg.MakeVocabulary());
  if (!cfg.subsample_size) return all;
  return SubsampleMeanings(all, static_cast<size_t>(*cfg.subsample_size), seed);
}

std::string RunRecord::RunId() const {
  return config_hash + "/" + std::to_string(seed);
}

json RunRecord::ToJson() const {
  return {{"config_hash", config_hash},
          {"seed", seed},
          {"run_dir", run_dir},
          {"steps", steps_path},
          {"checkpoint", checkpoint_path},
          {"report", report_path},
          {"wall_clock_seconds", wall_clock_seconds},
          {"code_version", code_version},
          {"failed", failed()}};
}

std::string RunDir(const ExperimentConfig& cfg, uint64_t seed) {
  return (fs::path(cfg.output_dir) / "runs" / cfg.Hash() / std::to_string(seed))
      .string();
}

json AnalyzeCorpus(const SignalCorpus& corpus, const ReceiverParams* receiver,
                   const ExperimentConfig& cfg, uint64_t seed) {
  if (corpus.entries.empty()) throw std::invalid_argument("analyze: empty corpus");
  corpus.Validate();
  const Vocabulary vocab = cfg.MakeVocabulary();
  for (const CorpusEntry& e : corpus.entries) {
    if (!IsValidMeaning(e.meaning, vocab)) {
      throw std::invalid_argument("analyze: meaning " + FormatMeaning(e.meaning) +
                                  " outside the configured vocabulary");
    }
    ValidateSignal(e.signal, cfg.MakeAlphabet());
  }

  json j;
  j["num_meanings"] = corpus.entries.size();

  Rng su_rng = StreamRng(seed, Stream::kMetrics);
  json su;
  for (int n = 1; n <= 3; ++n) {
    su[std::to_string(n)] = SignalUniqueness(corpus, n, cfg.MakeSuOptions(), su_rng);
  }
  j["su"] = su;

  json lengths;
  for (LengthGroup g : kAllLengthGroups) {
    bool any = std::any_of(corpus.entries.begin(), corpus.entries.end(),
                           [&](const CorpusEntry& e) { return InLengthGroup(e.cls, g); });
    lengths[Str(LengthGroupName(g))] = any ? json(MeanSignalLength(corpus, g)) : json();
  }
  j["mean_length"] = lengths;

  if (receiver == nullptr) return j;

  const std::vector<Signal> signals = corpus.Signals();
  const std::vector<ReceiverPrediction> preds =
      ReceiverPredictAll(*receiver, signals, vocab);

  std::vector<Meaning> test = SplitDataset(RunMeanings(cfg, seed), seed,
                                           cfg.test_fraction).test;
  std::sort(test.begin(), test.end());
  int64_t hits[2] = {0, 0};
  int64_t counts[2] = {0, 0};
  std::map<int, std::vector<ReceiverPrediction>> by_class;
  for (size_t i = 0; i < corpus.entries.size(); ++i) {
    const CorpusEntry& e = corpus.entries[i];
    int held_out = std::binary_search(test.begin(), test.end(), e.meaning) ? 1 : 0;
    ++counts[held_out];
    if (preds[i].Argmax() == e.meaning) ++hits[held_out];
    by_class[static_cast<int>(e.cls)].push_back(preds[i]);
  }
  auto ratio = [](int64_t a, int64_t b) {
    return b == 0 ? json() : json(static_cast<double>(a) / static_cast<double>(b));
  };
  j["accuracy"] = {{"train", ratio(hits[0], counts[0])},
                   {"test", ratio(hits[1], counts[1])},
                   {"all", ratio(hits[0] + hits[1], counts[0] + counts[1])}};

  json pa;
  for (RedundancyClass cls : kAllClasses) {
    json roles;
    auto it = by_class.find(static_cast<int>(cls));
    for (Role role : kAllRoles) {
      roles[Str(RoleName(role))] =
          it == by_class.end() ? json() : json(PredictiveAmbiguity(it->second, role));
    }
    pa[Str(RedundancyClassName(cls))] = roles;
  }
  j["pa"] = pa;
  return j;
}

json Analyze(const std::string& corpus_path, const std::string& checkpoint_path,
             const ExperimentConfig& cfg, uint64_t seed,
             std::optional<Language> language) {
  SignalCorpus corpus = ReadCorpusCsv(corpus_path);
  if (checkpoint_path.empty()) return AnalyzeCorpus(corpus, nullptr, cfg, seed);

  Checkpoint ckpt = ReadCheckpoint(checkpoint_path);
  if (cfg.kind == ExperimentKind::kSupervised) {
    if (!language) {
      if (cfg.languages.size() != 1) {
        throw std::invalid_argument("analyze: a language is required");
      }
      language = cfg.languages.front();
    }
    ReceiverParams receiver = LoadReceiver(ckpt.Store(ReceiverStoreName(*language)), cfg);
    return AnalyzeCorpus(corpus, &receiver, cfg, seed);
  }
  ReceiverParams receiver = LoadReceiver(ckpt.Store("receiver"), cfg);
  return {{"run", RunHeader(cfg, seed)},
          {"metrics", AnalyzeCorpus(corpus, &receiver, cfg, seed)}};
}

RunRecord RunSupervisedSeed(const ExperimentConfig& cfg, uint64_t seed) {
  if (cfg.kind != ExperimentKind::kSupervised) {
    throw std::invalid_argument("RunSupervisedSeed: not a supervised config");
  }
  cfg.Validate();
  const auto start = std::chrono::steady_clock::now();
  const Vocabulary vocab = cfg.MakeVocabulary();
  const Alphabet alphabet = cfg.MakeAlphabet();
  const std::vector<Meaning> meanings = RunMeanings(cfg, seed);
  const DatasetSplit split = SplitDataset(meanings, seed, cfg.test_fraction);
  if (split.test.empty() || split.train.empty()) {
    throw std::invalid_argument("supervised: split leaves an empty train or test set");
  }
  const Codebook codebook = BuildCodebook(vocab, alphabet, seed, cfg.codebook_mode);

  RunRecord rec;
  rec.config_hash = cfg.Hash();
  rec.seed = seed;
  rec.run_dir = RunDir(cfg, seed);
  fs::create_directories(rec.run_dir);
  rec.steps_path = rec.run_dir + "/steps.jsonl";
  rec.checkpoint_path = rec.run_dir + "/checkpoint.bin";
  rec.report_path = rec.run_dir + "/report.json";
  WriteConfig(cfg, rec.run_dir + "/config.json");
  WriteTextFile(rec.run_dir + "/codebook.json",
                DumpJson(CodebookFile{vocab, codebook}.ToJson()));

  struct Track {
    Language lang;
    std::vector<std::pair<Meaning, Signal>> train;
    std::vector<const std::pair<Meaning, Signal>*> order;
    std::vector<Signal> test_signals;
    ReceiverParams receiver;
    Rng rng;
    std::optional<int> first_perfect;
    double test_accuracy = 0.0;
  };
  std::vector<Track> tracks;
  for (Language lang : cfg.languages) {
    Rng init = StreamRng(seed, Stream::kInit);
    Track t{lang, GenerateLanguage(lang, split.train, codebook), {}, {},
            ReceiverParams::Init(vocab, alphabet, cfg.receiver_hidden, init),
            StreamRng(seed, Stream::kTrain), std::nullopt, 0.0};
    for (const auto& p : t.train) t.order.push_back(&p);
    for (const auto& p : GenerateLanguage(lang, split.test, codebook)) {
      t.test_signals.push_back(p.second);
    }
    tracks.push_back(std::move(t));
  }

  JsonlWriter steps(rec.steps_path);
  std::optional<int> pa_epoch;
  int epoch = 0;
  while (epoch < cfg.epochs && !pa_epoch) {
    ++epoch;
    bool all_perfect = true;
    for (Track& t : tracks) {
      Shuffle(t.order, t.rng);
      double loss_sum = 0.0;
      int batches = 0;
      for (size_t i = 0; i < t.order.size(); i += static_cast<size_t>(cfg.batch_size)) {
        size_t n = std::min(static_cast<size_t>(cfg.batch_size), t.order.size() - i);
        StepMetrics m = TrainStepSupervised(
            std::span<const std::pair<Meaning, Signal>* const>(t.order.data() + i, n),
            t.receiver, vocab, cfg.receiver_lr);
        loss_sum += m.receiver_loss;
        ++batches;
      }
      t.test_accuracy = ExactMatchAccuracy(
          ReceiverPredictAll(t.receiver, t.test_signals, vocab), split.test);
      if (t.test_accuracy == 1.0 && !t.first_perfect) t.first_perfect = epoch;
      all_perfect = all_perfect && t.test_accuracy == 1.0;
      steps.Write({{"epoch", epoch},
                   {"language", Str(LanguageName(t.lang))},
                   {"loss_r", loss_sum / batches},
                   {"test_acc", t.test_accuracy},
                   {"steps", t.receiver.store.step()}});
    }
    if (all_perfect) pa_epoch = epoch;
  }

  Checkpoint ckpt;
  for (const Track& t : tracks) {
    ckpt.stores.emplace_back(ReceiverStoreName(t.lang), t.receiver.store);
  }
  ckpt.rng_state = tracks.front().rng.SerializeState();
  WriteCheckpoint(ckpt, rec.checkpoint_path);

  json epochs_to_perfect, final_accuracy, metrics;
  for (const Track& t : tracks) {
    const std::string name = Str(LanguageName(t.lang));
    epochs_to_perfect[name] = t.first_perfect ? json(*t.first_perfect) : json();
    final_accuracy[name] = t.test_accuracy;
    SignalCorpus corpus =
        SignalCorpus::FromPairs(name, GenerateLanguage(t.lang, meanings, codebook));
    WriteCorpusCsv(corpus, rec.run_dir + "/" + CorpusFileName(t.lang));
    metrics[name] = AnalyzeCorpus(corpus, &t.receiver, cfg, seed);
  }
  rec.report = {{"run", RunHeader(cfg, seed)},
                {"epochs_run", epoch},
                {"epochs_to_perfect", epochs_to_perfect},
                {"final_test_accuracy", final_accuracy},
                {"pa_epoch", pa_epoch ? json(*pa_epoch) : json()},
                {"metrics", metrics}};
  WriteTextFile(rec.report_path, DumpJson(rec.report));
  rec.wall_clock_seconds = Seconds(start);
  WriteTextFile(rec.run_dir + "/run.json", DumpJson(rec.ToJson()));
  return rec;
}

RunRecord RunEmergentSeed(const ExperimentConfig& cfg, uint64_t seed) {
  if (cfg.kind != ExperimentKind::kEmergent) {
    throw std::invalid_argument("RunEmergentSeed: not an emergent config");
  }
  cfg.Validate();
  const auto start = std::chrono::steady_clock::now();
  const Vocabulary vocab = cfg.MakeVocabulary();
  const Alphabet alphabet = cfg.MakeAlphabet();
  const std::vector<Meaning> meanings = RunMeanings(cfg, seed);
  const DatasetSplit split = SplitDataset(meanings, seed, cfg.test_fraction);
  if (split.train.empty()) throw std::invalid_argument("emergent: empty train set");

  RunRecord rec;
  rec.config_hash = cfg.Hash();
  rec.seed = seed;
  rec.run_dir = RunDir(cfg, seed);
  fs::create_directories(rec.run_dir);
  rec.steps_path = rec.run_dir + "/steps.jsonl";
  rec.checkpoint_path = rec.run_dir + "/checkpoint.bin";
  rec.report_path = rec.run_dir + "/report.json";
  WriteConfig(cfg, rec.run_dir + "/config.json");

  Rng init = StreamRng(seed, Stream::kInit);
  SenderParams sender = SenderParams::Init(vocab, alphabet, cfg.sender_hidden, init);
  ReceiverParams receiver =
      ReceiverParams::Init(vocab, alphabet, cfg.receiver_hidden, init);
  Rng rng = StreamRng(seed, Stream::kTrain);
  Baseline baseline;
  const EmergentStepConfig step_cfg{cfg.alpha, cfg.entropy_coeff, cfg.sender_lr,
                                    cfg.receiver_lr, cfg.max_len};

  JsonlWriter steps(rec.steps_path);
  StepMetrics window{};
  int window_size = 0;
  std::optional<std::string> failure;
  for (int step = 1; step <= cfg.interactions; ++step) {
    std::vector<Meaning> batch = SampleBatch(split, rng, cfg.batch_size);
    StepMetrics m;
    try {
      m = TrainStepEmergent(batch, sender, receiver, baseline, vocab, step_cfg, rng);
    } catch (const NumericError& e) {
      failure = "step " + std::to_string(step) + ": " + e.what();
      steps.Write({{"step", step}, {"failure", *failure}});
      break;
    }
    window.sender_loss += m.sender_loss;
    window.receiver_loss += m.receiver_loss;
    window.accuracy += m.accuracy;
    window.mean_length += m.mean_length;
    ++window_size;
    if (step % cfg.log_every == 0 || step == cfg.interactions) {
      const double k = window_size;
      steps.Write({{"step", step},
                   {"loss_s", window.sender_loss / k},
                   {"loss_r", window.receiver_loss / k},
                   {"acc", window.accuracy / k},
                   {"mean_len", window.mean_length / k},
                   {"baseline", baseline.mean}});
      window = StepMetrics{};
      window_size = 0;
    }
  }

  Checkpoint ckpt;
  ckpt.stores.emplace_back("sender", sender.store);
  ckpt.stores.emplace_back("receiver", receiver.store);
  ckpt.baseline = baseline;
  ckpt.rng_state = rng.SerializeState();
  WriteCheckpoint(ckpt, rec.checkpoint_path);

  if (failure) {
    rec.report = {{"run", RunHeader(cfg, seed)}, {"failure", *failure}};
  } else {
    std::vector<Signal> signals =
        SenderGreedySignals(sender, meanings, vocab, cfg.max_len);
    SignalCorpus corpus = SignalCorpus::FromSignals(
        "emergent/" + rec.config_hash + "/" + std::to_string(seed), meanings, signals);
    WriteCorpusCsv(corpus, rec.run_dir + "/" + CorpusFileName(std::nullopt));
    rec.report = {{"run", RunHeader(cfg, seed)},
                  {"metrics", AnalyzeCorpus(corpus, &receiver, cfg, seed)}};
  }
  WriteTextFile(rec.report_path, DumpJson(rec.report));
  rec.wall_clock_seconds = Seconds(start);
  WriteTextFile(rec.run_dir + "/run.json", DumpJson(rec.ToJson()));
  return rec;
}

std::vector<RunRecord> RunExperiment(const ExperimentConfig& cfg) {
  cfg.Validate();
  std::vector<RunRecord> records;
  for (uint64_t seed : cfg.seeds) {
    RunRecord rec = cfg.kind == ExperimentKind::kSupervised
                        ? RunSupervisedSeed(cfg, seed)
                        : RunEmergentSeed(cfg, seed);
    std::cerr << "[" << cfg.name << "] seed " << seed << " done in "
              << FormatNumber(rec.wall_clock_seconds) << " s"
              << (rec.failed() ? " (failed)" : "") << "\n";
    records.push_back(std::move(rec));
  }
  const fs::path summary = fs::path(cfg.output_dir) / "summary";
  fs::create_directories(summary);
  WriteTextFile((summary / (cfg.name + ".csv")).string(), RunsCsv(cfg, records));
  if (cfg.kind == ExperimentKind::kSupervised) {
    WriteTextFile((summary / (cfg.name + ".json")).string(),
                  DumpJson(SummarizeSupervised(cfg, records)));
    WriteTextFile((summary / (cfg.name + "_figure4.csv")).string(),
                  Figure4Csv(records));
  } else {
    WriteTextFile((summary / (cfg.name + ".json")).string(),
                  DumpJson(SummarizeEmergent(cfg, records)));
  }
  return records;
}

std::vector<RunRecord> LoadRecords(const ExperimentConfig& cfg) {
  std::vector<RunRecord> records;
  for (uint64_t seed : cfg.seeds) {
    RunRecord rec;
    rec.config_hash = cfg.Hash();
    rec.seed = seed;
    rec.run_dir = RunDir(cfg, seed);
    rec.steps_path = rec.run_dir + "/steps.jsonl";
    rec.checkpoint_path = rec.run_dir + "/checkpoint.bin";
    rec.report_path = rec.run_dir + "/report.json";
    if (!fs::exists(rec.report_path)) {
      throw std::runtime_error("missing report for run " + rec.RunId() + " at " +
                               rec.report_path);
    }
    rec.report = json::parse(ReadTextFile(rec.report_path));
    const std::string run_json = rec.run_dir + "/run.json";
    if (fs::exists(run_json)) {
      json r = json::parse(ReadTextFile(run_json));
      rec.wall_clock_seconds = r.value("wall_clock_seconds", 0.0);
      rec.code_version = r.value("code_version", std::string(kCodeVersion));
    }
    records.push_back(std::move(rec));
  }
  return records;
}

json SummarizeSupervised(const ExperimentConfig& cfg, std::span<const RunRecord> records) {
  json out = {{"experiment", cfg.name}, {"config_hash", cfg.Hash()}};
  json warnings = json::array();
  std::map<Language, std::vector<double>> epochs;
  json table;
  for (Language lang : cfg.languages) {
    const std::string name = Str(LanguageName(lang));
    std::vector<std::string> ids;
    std::vector<double>& xs = epochs[lang];
    int never = 0;
    for (const RunRecord& r : records) {
      const json& e = r.report.at("epochs_to_perfect").at(name);
      if (e.is_null()) {
        ++never;
        warnings.push_back(name + " never reached 100% test accuracy in run " +
                           r.RunId() + "; excluded");
        continue;
      }
      xs.push_back(e.get<double>());
      ids.push_back(r.RunId());
    }
    json row = IntervalJson(xs);
    row["never_converged"] = never;
    row["epochs"] = xs;
    row["run_ids"] = ids;
    table[name] = row;
  }
  out["epochs_to_perfect"] = table;

  json tests = json::array();
  for (size_t a = 0; a < cfg.languages.size(); ++a) {
    for (size_t b = a + 1; b < cfg.languages.size(); ++b) {
      json t = TTestJson(epochs[cfg.languages[a]], epochs[cfg.languages[b]]);
      t["a"] = Str(LanguageName(cfg.languages[a]));
      t["b"] = Str(LanguageName(cfg.languages[b]));
      tests.push_back(t);
    }
  }
  out["epoch_ttests"] = tests;

  // PA comparisons over the runs where every language was perfect on a common
  // epoch.
  std::vector<const RunRecord*> pa_runs;
  for (const RunRecord& r : records) {
    if (!r.report.at("pa_epoch").is_null()) pa_runs.push_back(&r);
  }
  json fig = {{"runs", pa_runs.size()}};
  auto pa_values = [&](Language lang, RedundancyClass cls, std::span<const Role> roles) {
    std::vector<double> xs;
    for (const RunRecord* r : pa_runs) {
      const json& pa = r->report.at("metrics").at(Str(LanguageName(lang))).at("pa").at(
          Str(RedundancyClassName(cls)));
      double sum = 0.0;
      for (Role role : roles) sum += pa.at(Str(RoleName(role))).get<double>();
      xs.push_back(sum / static_cast<double>(roles.size()));
    }
    return xs;
  };
  const bool has_baseline =
      std::find(cfg.languages.begin(), cfg.languages.end(), Language::kNoElision) !=
      cfg.languages.end();
  json redundant = json::array();
  if (has_baseline) {
    const std::pair<RedundancyClass, Role> cells[] = {
        {RedundancyClass::kRedundantSubject, Role::kSubj2},
        {RedundancyClass::kRedundantVerb, Role::kVerb2}};
    for (Language lang : cfg.languages) {
      if (lang == Language::kNoElision) continue;
      for (const auto& [cls, role] : cells) {
        const Role one[] = {role};
        json t = TTestJson(pa_values(lang, cls, one),
                           pa_values(Language::kNoElision, cls, one));
        t["panel"] = Str(RedundancyClassName(cls));
        t["role"] = Str(RoleName(role));
        t["language"] = Str(LanguageName(lang));
        t["baseline"] = "no_elision";
        redundant.push_back(t);
      }
    }
  }
  fig["redundant_role_tests"] = redundant;
  json nonred = json::array();
  for (size_t a = 0; a < cfg.languages.size(); ++a) {
    for (size_t b = a + 1; b < cfg.languages.size(); ++b) {
      json t = TTestJson(pa_values(cfg.languages[a], RedundancyClass::kNonRedundant,
                                   kFigureRoles),
                         pa_values(cfg.languages[b], RedundancyClass::kNonRedundant,
                                   kFigureRoles));
      t["a"] = Str(LanguageName(cfg.languages[a]));
      t["b"] = Str(LanguageName(cfg.languages[b]));
      nonred.push_back(t);
    }
  }
  fig["non_redundant_tests"] = nonred;
  out["figure4"] = fig;
  out["warnings"] = warnings;
  for (const auto& w : warnings) std::cerr << "warning: " << w.get<std::string>() << "\n";
  return out;
}

namespace {

struct EmergentColumn {
  const char* name;
  std::vector<const char*> path;
};

const std::vector<EmergentColumn>& EmergentColumns() {
  static const std::vector<EmergentColumn> cols = {
      {"accuracy_train", {"accuracy", "train"}},
      {"accuracy_test", {"accuracy", "test"}},
      {"su1", {"su", "1"}},
      {"su2", {"su", "2"}},
      {"su3", {"su", "3"}},
      {"length_all", {"mean_length", "all"}},
      {"length_partial", {"mean_length", "partial"}},
      {"length_full", {"mean_length", "full"}},
      {"length_non_redundant", {"mean_length", "non_redundant"}},
  };
  return cols;
}

std::optional<double> MetricAt(const RunRecord& r, const EmergentColumn& col) {
  if (r.failed()) return std::nullopt;
  const json* node = &r.report.at("metrics");
  for (const char* key : col.path) {
    if (!node->contains(key)) return std::nullopt;
    node = &node->at(key);
  }
  if (node->is_null()) return std::nullopt;
  return node->get<double>();
}

std::vector<double> ColumnValues(std::span<const RunRecord> records,
                                 const EmergentColumn& col) {
  std::vector<double> xs;
  for (const RunRecord& r : records) {
    if (auto v = MetricAt(r, col)) xs.push_back(*v);
  }
  return xs;
}

}  // namespace

json SummarizeEmergent(const ExperimentConfig& cfg, std::span<const RunRecord> records) {
  json out = {{"experiment", cfg.name},
              {"config_hash", cfg.Hash()},
              {"condition", Str(ConditionName(cfg.condition))},
              {"alpha", cfg.alpha}};
  std::vector<std::string> ids, failed;
  for (const RunRecord& r : records) (r.failed() ? failed : ids).push_back(r.RunId());
  out["run_ids"] = ids;
  out["failed_runs"] = failed;
  json cols;
  for (const EmergentColumn& col : EmergentColumns()) {
    std::vector<double> xs = ColumnValues(records, col);
    json c = IntervalJson(xs);
    c["values"] = xs;
    if (!xs.empty()) {
      c["min"] = *std::min_element(xs.begin(), xs.end());
      c["max"] = *std::max_element(xs.begin(), xs.end());
    }
    cols[col.name] = c;
  }
  out["metrics"] = cols;
  return out;
}

json CompareConditions(std::span<const RunRecord> control,
                       std::span<const RunRecord> efficiency) {
  json out;
  for (const EmergentColumn& col : EmergentColumns()) {
    std::vector<double> c = ColumnValues(control, col);
    std::vector<double> e = ColumnValues(efficiency, col);
    // Positive difference: Control above +Efficiency.
    json t = TTestJson(c, e);
    if (!c.empty()) t["control_mean"] = Mean(c);
    if (!e.empty()) t["efficiency_mean"] = Mean(e);
    out[col.name] = t;
  }
  return out;
}

std::string RunsCsv(const ExperimentConfig& cfg, std::span<const RunRecord> records) {
  std::ostringstream os;
  if (cfg.kind == ExperimentKind::kSupervised) {
    os << "run_id,seed,language,epochs_to_perfect,pa_epoch,final_test_accuracy\n";
    for (const RunRecord& r : records) {
      for (Language lang : cfg.languages) {
        const std::string name = Str(LanguageName(lang));
        const json& e = r.report.at("epochs_to_perfect").at(name);
        const json& p = r.report.at("pa_epoch");
        os << r.RunId() << ',' << r.seed << ',' << name << ','
           << (e.is_null() ? "" : std::to_string(e.get<int>())) << ','
           << (p.is_null() ? "" : std::to_string(p.get<int>())) << ','
           << FormatNumber(r.report.at("final_test_accuracy").at(name).get<double>())
           << '\n';
      }
    }
    return os.str();
  }
  os << "run_id,seed,condition,alpha,failed";
  for (const EmergentColumn& col : EmergentColumns()) os << ',' << col.name;
  os << '\n';
  for (const RunRecord& r : records) {
    os << r.RunId() << ',' << r.seed << ',' << ConditionName(cfg.condition) << ','
       << FormatNumber(cfg.alpha) << ',' << (r.failed() ? 1 : 0);
    for (const EmergentColumn& col : EmergentColumns()) {
      auto v = MetricAt(r, col);
      os << ',' << (v ? FormatNumber(*v) : "");
    }
    os << '\n';
  }
  return os.str();
}

std::string Figure4Csv(std::span<const RunRecord> records) {
  std::ostringstream os;
  os << kFigureHeader;
  std::vector<const RunRecord*> pa_runs;
  for (const RunRecord& r : records) {
    if (!r.report.at("pa_epoch").is_null()) pa_runs.push_back(&r);
  }
  if (pa_runs.empty()) return os.str();
  std::vector<std::string> ids;
  for (const RunRecord* r : pa_runs) ids.push_back(r->RunId());
  for (const auto& item : pa_runs.front()->report.at("metrics").items()) {
    PaSeries values;
    for (const RunRecord* r : pa_runs) CollectPa(r->report.at("metrics").at(item.key()), values);
    AppendFigureRows(os, item.key(), values, ids);
  }
  return os.str();
}

std::string Figure5Csv(std::span<const RunRecord> control,
                       std::span<const RunRecord> efficiency) {
  std::ostringstream os;
  os << kFigureHeader;
  const std::pair<const char*, std::span<const RunRecord>> groups[] = {
      {"control", control}, {"efficiency", efficiency}};
  for (const auto& [series, records] : groups) {
    PaSeries values;
    std::vector<std::string> ids;
    for (const RunRecord& r : records) {
      if (r.failed()) continue;
      CollectPa(r.report.at("metrics"), values);
      ids.push_back(r.RunId());
    }
    AppendFigureRows(os, series, values, ids);
  }
  return os.str();
}

void WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace anaphor
