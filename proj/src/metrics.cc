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

#include "anaphor/metrics.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>

namespace anaphor {
namespace {

constexpr char kCsvHeader[] = "subj1,verb1,conj,subj2,verb2,signal,class";

std::vector<std::string_view> SplitFields(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    const size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

int ParseInt(std::string_view field) {
  std::string text(field);
  size_t used = 0;
  const int value = std::stoi(text, &used);
  if (used != text.size()) throw std::invalid_argument("bad integer: " + text);
  return value;
}

template <typename Signals>
NgramSet Extract(const Signals& signals, int n) {
  if (n < 1 || n > kMaxNgramOrder) {
    throw std::invalid_argument("ExtractNgrams: order must be in [1, 8]");
  }
  NgramSet out;
  out.n = n;
  for (const auto& item : signals) {
    const Signal& s = *item;
    const size_t len = static_cast<size_t>(SignalLength(s));
    for (size_t i = 0; i + static_cast<size_t>(n) <= len; ++i) {
      uint64_t packed = 0;
      for (size_t k = 0; k < static_cast<size_t>(n); ++k) {
        const int sym = s[i + k];
        if (sym < 0 || sym > 255) {
          throw std::invalid_argument("ExtractNgrams: symbol id above 255");
        }
        packed = (packed << 8) | static_cast<uint64_t>(sym);
      }
      out.grams.push_back(packed);
    }
  }
  std::sort(out.grams.begin(), out.grams.end());
  out.grams.erase(std::unique(out.grams.begin(), out.grams.end()), out.grams.end());
  return out;
}

// Partial Fisher-Yates: moves a uniform sample of `k` indices to the front.
void PartialShuffle(std::vector<size_t>& idx, size_t k, Rng& rng) {
  for (size_t i = 0; i < k; ++i) {
    const size_t j = i + static_cast<size_t>(rng.UniformInt(idx.size() - i));
    std::swap(idx[i], idx[j]);
  }
}

}  // namespace

SignalCorpus SignalCorpus::FromPairs(std::string provenance,
                                     std::span<const std::pair<Meaning, Signal>> pairs) {
  SignalCorpus c;
  c.provenance = std::move(provenance);
  c.entries.reserve(pairs.size());
  for (const auto& [m, s] : pairs) c.entries.push_back({m, s, ClassifyRedundancy(m)});
  return c;
}

SignalCorpus SignalCorpus::FromSignals(std::string provenance,
                                       std::span<const Meaning> meanings,
                                       std::span<const Signal> signals) {
  if (meanings.size() != signals.size()) {
    throw std::invalid_argument("SignalCorpus: meaning and signal counts differ");
  }
  SignalCorpus c;
  c.provenance = std::move(provenance);
  c.entries.reserve(meanings.size());
  for (size_t i = 0; i < meanings.size(); ++i) {
    c.entries.push_back({meanings[i], signals[i], ClassifyRedundancy(meanings[i])});
  }
  return c;
}

void SignalCorpus::Validate() const {
  for (const CorpusEntry& e : entries) {
    if (e.cls != ClassifyRedundancy(e.meaning)) {
      throw std::invalid_argument("corpus: class label disagrees with meaning " +
                                  FormatMeaning(e.meaning));
    }
    ValidateSignal(e.signal, Alphabet{255});
  }
}

std::vector<Meaning> SignalCorpus::Meanings() const {
  std::vector<Meaning> out;
  out.reserve(entries.size());
  for (const CorpusEntry& e : entries) out.push_back(e.meaning);
  return out;
}

std::vector<Signal> SignalCorpus::Signals() const {
  std::vector<Signal> out;
  out.reserve(entries.size());
  for (const CorpusEntry& e : entries) out.push_back(e.signal);
  return out;
}

SignalCorpus SignalCorpus::Filter(RedundancyClass cls) const {
  SignalCorpus out;
  out.provenance = provenance;
  for (const CorpusEntry& e : entries) {
    if (e.cls == cls) out.entries.push_back(e);
  }
  return out;
}

std::string CorpusToCsv(const SignalCorpus& corpus) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const CorpusEntry& e : corpus.entries) {
    for (int w : e.meaning.words) os << w << ',';
    os << FormatSignal(e.signal) << ',' << RedundancyClassName(e.cls) << '\n';
  }
  return os.str();
}

SignalCorpus CorpusFromCsv(std::string_view csv, std::string provenance) {
  SignalCorpus corpus;
  corpus.provenance = std::move(provenance);
  std::vector<std::string_view> lines = SplitFields(csv, '\n');
  if (lines.empty() || lines.front() != kCsvHeader) {
    throw std::invalid_argument("corpus CSV: missing header");
  }
  for (size_t i = 1; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto fields = SplitFields(line, ',');
    if (fields.size() != 7) {
      throw std::invalid_argument("corpus CSV line " + std::to_string(i + 1) +
                                  ": expected 7 fields");
    }
    CorpusEntry e;
    for (int r = 0; r < kNumRoles; ++r) {
      e.meaning.words[static_cast<size_t>(r)] = ParseInt(fields[static_cast<size_t>(r)]);
    }
    e.signal = ParseSignal(fields[5]);
    e.cls = ParseRedundancyClass(fields[6]);
    corpus.entries.push_back(std::move(e));
  }
  corpus.Validate();
  return corpus;
}

void WriteCorpusCsv(const SignalCorpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << CorpusToCsv(corpus);
  if (!out) throw std::runtime_error("write failed: " + path);
}

SignalCorpus ReadCorpusCsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return CorpusFromCsv(text, path);
}

bool NgramSet::Contains(std::span<const int> gram) const {
  if (static_cast<int>(gram.size()) != n) return false;
  uint64_t packed = 0;
  for (int sym : gram) {
    if (sym < 0 || sym > 255) return false;
    packed = (packed << 8) | static_cast<uint64_t>(sym);
  }
  return std::binary_search(grams.begin(), grams.end(), packed);
}

std::vector<std::vector<int>> NgramSet::Unpacked() const {
  std::vector<std::vector<int>> out;
  out.reserve(grams.size());
  for (uint64_t g : grams) {
    std::vector<int> gram(static_cast<size_t>(n));
    for (int k = n - 1; k >= 0; --k) {
      gram[static_cast<size_t>(k)] = static_cast<int>(g & 0xff);
      g >>= 8;
    }
    out.push_back(std::move(gram));
  }
  return out;
}

NgramSet ExtractNgrams(std::span<const Signal> signals, int n) {
  std::vector<const Signal*> ptrs;
  ptrs.reserve(signals.size());
  for (const Signal& s : signals) ptrs.push_back(&s);
  return Extract(ptrs, n);
}

NgramSet ExtractNgrams(std::span<const Signal* const> signals, int n) {
  return Extract(signals, n);
}

double Jaccard(const NgramSet& a, const NgramSet& b) {
  if (a.n != b.n) throw std::invalid_argument("Jaccard: n-gram orders differ");
  if (a.empty() && b.empty()) return 1.0;
  std::vector<uint64_t> common;
  std::set_intersection(a.grams.begin(), a.grams.end(), b.grams.begin(),
                        b.grams.end(), std::back_inserter(common));
  const size_t uni = a.size() + b.size() - common.size();
  return static_cast<double>(common.size()) / static_cast<double>(uni);
}

double SignalUniqueness(const SignalCorpus& corpus, int n, const SuOptions& opts,
                        Rng& rng) {
  if (opts.sample_size < 1 || opts.resamples < 1) {
    throw std::invalid_argument("SignalUniqueness: sample_size and resamples must be positive");
  }
  std::vector<size_t> nonred;
  std::vector<size_t> red;
  for (size_t i = 0; i < corpus.entries.size(); ++i) {
    (IsRedundant(corpus.entries[i].cls) ? red : nonred).push_back(i);
  }
  const size_t k = static_cast<size_t>(opts.sample_size);
  if (nonred.size() < 2 * k || red.size() < k) {
    throw std::invalid_argument(
        "SignalUniqueness: corpus has " + std::to_string(nonred.size()) +
        " non-redundant and " + std::to_string(red.size()) +
        " redundant signals; need " + std::to_string(2 * k) + " and " +
        std::to_string(k));
  }
  std::vector<const Signal*> a(k), b(k), r(k);
  double total = 0.0;
  for (int draw = 0; draw < opts.resamples; ++draw) {
    PartialShuffle(nonred, 2 * k, rng);
    PartialShuffle(red, k, rng);
    for (size_t i = 0; i < k; ++i) {
      a[i] = &corpus.entries[nonred[i]].signal;
      b[i] = &corpus.entries[nonred[k + i]].signal;
      r[i] = &corpus.entries[red[i]].signal;
    }
    const NgramSet sa = ExtractNgrams(a, n);
    total += Jaccard(sa, ExtractNgrams(b, n)) - Jaccard(ExtractNgrams(r, n), sa);
  }
  return total / opts.resamples;
}

double EntropyBits(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

double PredictiveAmbiguity(std::span<const ReceiverPrediction> preds, Role role) {
  if (preds.empty()) throw std::invalid_argument("PredictiveAmbiguity: empty corpus");
  double total = 0.0;
  for (const ReceiverPrediction& p : preds) total += EntropyBits(p[role]);
  return total / static_cast<double>(preds.size());
}

double PredictiveAmbiguity(const ReceiverParams& receiver,
                           const SignalCorpus& corpus, const Vocabulary& vocab,
                           Role role) {
  if (corpus.entries.empty()) {
    throw std::invalid_argument("PredictiveAmbiguity: empty corpus");
  }
  const std::vector<Signal> signals = corpus.Signals();
  return PredictiveAmbiguity(ReceiverPredictAll(receiver, signals, vocab), role);
}

std::string_view LengthGroupName(LengthGroup g) {
  switch (g) {
    case LengthGroup::kAll: return "all";
    case LengthGroup::kPartial: return "partial";
    case LengthGroup::kFull: return "full";
    case LengthGroup::kNonRedundant: return "non_redundant";
  }
  return "?";
}

bool InLengthGroup(RedundancyClass cls, LengthGroup g) {
  switch (g) {
    case LengthGroup::kAll: return true;
    case LengthGroup::kPartial:
      return cls == RedundancyClass::kRedundantSubject ||
             cls == RedundancyClass::kRedundantVerb;
    case LengthGroup::kFull: return cls == RedundancyClass::kFullyRedundant;
    case LengthGroup::kNonRedundant: return cls == RedundancyClass::kNonRedundant;
  }
  return false;
}

double MeanSignalLength(const SignalCorpus& corpus, LengthGroup group) {
  double total = 0.0;
  size_t count = 0;
  for (const CorpusEntry& e : corpus.entries) {
    if (!InLengthGroup(e.cls, group)) continue;
    total += SignalLength(e.signal);
    ++count;
  }
  if (count == 0) {
    throw std::invalid_argument("MeanSignalLength: empty group " +
                                std::string(LengthGroupName(group)));
  }
  return total / static_cast<double>(count);
}

double CommunicativeAccuracy(const ReceiverParams& receiver,
                             const SignalCorpus& corpus, const Vocabulary& vocab) {
  if (corpus.entries.empty()) return 0.0;
  const std::vector<Signal> signals = corpus.Signals();
  const std::vector<Meaning> targets = corpus.Meanings();
  return ExactMatchAccuracy(ReceiverPredictAll(receiver, signals, vocab), targets);
}

}  // namespace anaphor
