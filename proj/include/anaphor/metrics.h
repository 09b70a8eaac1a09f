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

#ifndef ANAPHOR_METRICS_H_
#define ANAPHOR_METRICS_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "anaphor/agents.h"
#include "anaphor/meanings.h"
#include "anaphor/rng.h"
#include "anaphor/signal.h"

namespace anaphor {

struct CorpusEntry {
  Meaning meaning;
  Signal signal;
  RedundancyClass cls = RedundancyClass::kNonRedundant;
};

// Signals paired with the meanings they express. `provenance` names the
// language or run the signals came from.
struct SignalCorpus {
  std::string provenance;
  std::vector<CorpusEntry> entries;

  static SignalCorpus FromPairs(std::string provenance,
                                std::span<const std::pair<Meaning, Signal>> pairs);
  static SignalCorpus FromSignals(std::string provenance,
                                  std::span<const Meaning> meanings,
                                  std::span<const Signal> signals);

  // Throws std::invalid_argument when a class label disagrees with the
  // meaning or a signal is not EOS-terminated.
  void Validate() const;

  std::vector<Meaning> Meanings() const;
  std::vector<Signal> Signals() const;
  SignalCorpus Filter(RedundancyClass cls) const;
};

// CSV with header "subj1,verb1,conj,subj2,verb2,signal,class"; the signal
// column holds space-separated symbol ids.
std::string CorpusToCsv(const SignalCorpus& corpus);
SignalCorpus CorpusFromCsv(std::string_view csv, std::string provenance);
void WriteCorpusCsv(const SignalCorpus& corpus, const std::string& path);
SignalCorpus ReadCorpusCsv(const std::string& path);

// Sorted, duplicate-free n-grams, each packed 8 bits per symbol.
struct NgramSet {
  int n = 1;
  std::vector<uint64_t> grams;

  size_t size() const { return grams.size(); }
  bool empty() const { return grams.empty(); }
  bool Contains(std::span<const int> gram) const;
  std::vector<std::vector<int>> Unpacked() const;
};

inline constexpr int kMaxNgramOrder = 8;

// Every contiguous run of n non-EOS symbols. Throws std::invalid_argument for
// n outside [1, 8] or symbols above 255.
NgramSet ExtractNgrams(std::span<const Signal> signals, int n);
NgramSet ExtractNgrams(std::span<const Signal* const> signals, int n);

// |a & b| / |a | b|, 1.0 when both are empty. Throws on order mismatch.
double Jaccard(const NgramSet& a, const NgramSet& b);

struct SuOptions {
  int sample_size = 500;
  int resamples = 20;
};

// J(nonred, nonred') - J(red, nonred), averaged over independent draws. Each
// draw takes two disjoint non-redundant samples and one redundant sample,
// all without replacement.
double SignalUniqueness(const SignalCorpus& corpus, int n, const SuOptions& opts,
                        Rng& rng);

// Base-2 Shannon entropy.
double EntropyBits(std::span<const double> probs);

// Mean entropy of the role distribution over a set of predictions.
double PredictiveAmbiguity(std::span<const ReceiverPrediction> preds, Role role);
double PredictiveAmbiguity(const ReceiverParams& receiver,
                           const SignalCorpus& corpus, const Vocabulary& vocab,
                           Role role);

enum class LengthGroup { kAll, kPartial, kFull, kNonRedundant };
std::string_view LengthGroupName(LengthGroup g);
inline constexpr LengthGroup kAllLengthGroups[] = {
    LengthGroup::kAll, LengthGroup::kPartial, LengthGroup::kFull,
    LengthGroup::kNonRedundant};

bool InLengthGroup(RedundancyClass cls, LengthGroup g);

// Mean |m| over a group, EOS excluded. Throws on an empty group.
double MeanSignalLength(const SignalCorpus& corpus, LengthGroup group);

double CommunicativeAccuracy(const ReceiverParams& receiver,
                             const SignalCorpus& corpus, const Vocabulary& vocab);

}  // namespace anaphor

#endif  // ANAPHOR_METRICS_H_
