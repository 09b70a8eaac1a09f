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

#include <cmath>
#include <vector>

#include "anaphor/handcrafted.h"
#include "gtest/gtest.h"

namespace anaphor {
namespace {

ReceiverPrediction UniformPrediction(int words) {
  ReceiverPrediction p;
  for (auto& role : p.roles) role.assign(static_cast<size_t>(words), 1.0 / words);
  p.roles[static_cast<size_t>(Role::kConj)] = {1.0};
  return p;
}

TEST(NgramTest, ExcludesEos) {
  const std::vector<Signal> s = {{5, 7, 0}};
  const NgramSet g = ExtractNgrams(s, 1);
  EXPECT_EQ(g.size(), 2u);
  EXPECT_TRUE(g.Contains(std::vector<int>{5}));
  EXPECT_TRUE(g.Contains(std::vector<int>{7}));
  EXPECT_FALSE(g.Contains(std::vector<int>{0}));
}

TEST(NgramTest, Bigrams) {
  const std::vector<Signal> s = {{5, 7, 9, 0}};
  const NgramSet g = ExtractNgrams(s, 2);
  const std::vector<std::vector<int>> expected = {{5, 7}, {7, 9}};
  EXPECT_EQ(g.Unpacked(), expected);
}

TEST(NgramTest, TooLongAndBadOrder) {
  const std::vector<Signal> s = {{5, 7, 0}, {1, 0}};
  EXPECT_TRUE(ExtractNgrams(s, 3).empty());
  EXPECT_THROW(ExtractNgrams(s, 0), std::invalid_argument);
}

TEST(JaccardTest, Axioms) {
  const std::vector<Signal> abc = {{1, 2, 3, 4, 0}};
  const std::vector<Signal> bc = {{2, 3, 0}};
  const std::vector<Signal> other = {{9, 8, 0}};
  const NgramSet a = ExtractNgrams(abc, 2);
  const NgramSet b = ExtractNgrams(bc, 2);
  const NgramSet c = ExtractNgrams(other, 2);
  EXPECT_DOUBLE_EQ(Jaccard(a, a), 1.0);
  EXPECT_DOUBLE_EQ(Jaccard(a, c), 0.0);
  EXPECT_DOUBLE_EQ(Jaccard(a, b), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(Jaccard(a, b), Jaccard(b, a));
  EXPECT_DOUBLE_EQ(Jaccard(NgramSet{2, {}}, NgramSet{2, {}}), 1.0);
  EXPECT_THROW(Jaccard(a, ExtractNgrams(abc, 1)), std::invalid_argument);
}

TEST(PredictiveAmbiguityTest, UniformAndDeterministic) {
  const std::vector<ReceiverPrediction> uniform(7, UniformPrediction(15));
  EXPECT_NEAR(PredictiveAmbiguity(uniform, Role::kSubj1), std::log2(15.0), 1e-12);
  EXPECT_NEAR(PredictiveAmbiguity(uniform, Role::kVerb2), 3.9068905956085187, 1e-6);
  EXPECT_EQ(PredictiveAmbiguity(uniform, Role::kConj), 0.0);
  ReceiverPrediction sure = UniformPrediction(15);
  for (auto& role : sure.roles) {
    std::fill(role.begin(), role.end(), 0.0);
    role[0] = 1.0;
  }
  const std::vector<ReceiverPrediction> det(3, sure);
  EXPECT_EQ(PredictiveAmbiguity(det, Role::kSubj2), 0.0);
  EXPECT_THROW(PredictiveAmbiguity(std::vector<ReceiverPrediction>{}, Role::kSubj1),
               std::invalid_argument);
}

TEST(PredictiveAmbiguityTest, TrainedReceiverWithinBounds) {
  const Vocabulary vocab = Vocabulary::WithSizes(4, 4);
  Rng rng(5);
  const ReceiverParams receiver = ReceiverParams::Init(vocab, Alphabet{10}, 8, rng);
  const Codebook cb = BuildCodebook(vocab, Alphabet{10}, 1);
  const auto pairs = GenerateLanguage(Language::kNoElision, EnumerateMeanings(vocab), cb);
  const SignalCorpus corpus = SignalCorpus::FromPairs("no_elision", pairs);
  for (Role role : kAllRoles) {
    const double pa = PredictiveAmbiguity(receiver, corpus, vocab, role);
    EXPECT_GE(pa, 0.0);
    EXPECT_LE(pa, std::log2(static_cast<double>(vocab.RoleSize(role))) + 1e-12);
  }
}

SignalCorpus ShuffledLabelCorpus(uint64_t seed) {
  const Vocabulary vocab = Vocabulary::WithSizes(15, 15);
  const Codebook cb = BuildCodebook(vocab, Alphabet{26}, seed);
  auto pairs = GenerateLanguage(Language::kPronoun, EnumerateMeanings(vocab), cb);
  std::vector<Signal> signals;
  std::vector<Meaning> meanings;
  for (auto& [m, s] : pairs) {
    meanings.push_back(m);
    signals.push_back(s);
  }
  Rng rng(seed);
  Shuffle(signals, rng);
  return SignalCorpus::FromSignals("shuffled", meanings, signals);
}

TEST(SignalUniquenessTest, LabelShuffleNull) {
  const SignalCorpus corpus = ShuffledLabelCorpus(3);
  for (int n = 1; n <= 3; ++n) {
    Rng rng(100 + n);
    EXPECT_LT(std::abs(SignalUniqueness(corpus, n, SuOptions{}, rng)), 0.02) << n;
  }
}

TEST(SignalUniquenessTest, NoElisionIsZero) {
  const Vocabulary vocab = Vocabulary::WithSizes(15, 15);
  const Codebook cb = BuildCodebook(vocab, Alphabet{26}, 9);
  const auto pairs = GenerateLanguage(Language::kNoElision, EnumerateMeanings(vocab), cb);
  const SignalCorpus corpus = SignalCorpus::FromPairs("no_elision", pairs);
  Rng rng(1);
  EXPECT_NEAR(SignalUniqueness(corpus, 1, SuOptions{}, rng), 0.0, 1e-12);
}

TEST(SignalUniquenessTest, InsufficientCorpus) {
  const Vocabulary vocab = Vocabulary::WithSizes(3, 3);
  const Codebook cb = BuildCodebook(vocab, Alphabet{10}, 9);
  const auto pairs = GenerateLanguage(Language::kPronoun, EnumerateMeanings(vocab), cb);
  const SignalCorpus corpus = SignalCorpus::FromPairs("pronoun", pairs);
  Rng rng(1);
  EXPECT_THROW(SignalUniqueness(corpus, 2, SuOptions{500, 20}, rng), std::invalid_argument);
  EXPECT_NO_THROW(SignalUniqueness(corpus, 2, SuOptions{10, 2}, rng));
}

TEST(SignalUniquenessTest, DeterministicGivenSeed) {
  const SignalCorpus corpus = ShuffledLabelCorpus(4);
  Rng a(8), b(8);
  EXPECT_EQ(SignalUniqueness(corpus, 2, SuOptions{100, 3}, a),
            SignalUniqueness(corpus, 2, SuOptions{100, 3}, b));
}

TEST(SignalLengthTest, GroupsAndMax) {
  SignalCorpus corpus;
  corpus.entries.push_back({Meaning::Of(0, 0, 0, 0), {1, 2, 0}, RedundancyClass::kFullyRedundant});
  corpus.entries.push_back({Meaning::Of(0, 0, 1, 0), {1, 2, 3, 0}, RedundancyClass::kRedundantVerb});
  corpus.entries.push_back({Meaning::Of(0, 0, 1, 1), {1, 2, 3, 4, 5, 0}, RedundancyClass::kNonRedundant});
  EXPECT_DOUBLE_EQ(MeanSignalLength(corpus, LengthGroup::kAll), 10.0 / 3.0);
  EXPECT_DOUBLE_EQ(MeanSignalLength(corpus, LengthGroup::kFull), 2.0);
  EXPECT_DOUBLE_EQ(MeanSignalLength(corpus, LengthGroup::kPartial), 3.0);
  EXPECT_DOUBLE_EQ(MeanSignalLength(corpus, LengthGroup::kNonRedundant), 5.0);
  SignalCorpus capped;
  capped.entries.push_back({Meaning::Of(0, 0, 1, 1), Signal(10, 3), RedundancyClass::kNonRedundant});
  capped.entries[0].signal.push_back(kEos);
  EXPECT_DOUBLE_EQ(MeanSignalLength(capped, LengthGroup::kAll), 10.0);
  EXPECT_THROW(MeanSignalLength(capped, LengthGroup::kFull), std::invalid_argument);
}

TEST(CorpusTest, CsvRoundTrip) {
  const Vocabulary vocab = Vocabulary::WithSizes(3, 2);
  const Codebook cb = BuildCodebook(vocab, Alphabet{10}, 2);
  const auto pairs = GenerateLanguage(Language::kProdrop, EnumerateMeanings(vocab), cb);
  const SignalCorpus corpus = SignalCorpus::FromPairs("prodrop", pairs);
  const std::string csv = CorpusToCsv(corpus);
  const SignalCorpus back = CorpusFromCsv(csv, "prodrop");
  ASSERT_EQ(back.entries.size(), corpus.entries.size());
  for (size_t i = 0; i < back.entries.size(); ++i) {
    EXPECT_EQ(back.entries[i].meaning, corpus.entries[i].meaning);
    EXPECT_EQ(back.entries[i].signal, corpus.entries[i].signal);
    EXPECT_EQ(back.entries[i].cls, corpus.entries[i].cls);
  }
  EXPECT_EQ(CorpusToCsv(back), csv);
}

TEST(CorpusTest, RejectsInconsistentLabel) {
  const std::string csv =
      "subj1,verb1,conj,subj2,verb2,signal,class\n0,0,0,0,0,1 2 0,non_redundant\n";
  EXPECT_THROW(CorpusFromCsv(csv, "bad"), std::invalid_argument);
  EXPECT_THROW(CorpusFromCsv("nope\n", "bad"), std::invalid_argument);
}

TEST(CommunicativeAccuracyTest, UntrainedReceiverNearChance) {
  const Vocabulary vocab = Vocabulary::WithSizes(3, 3);
  Rng rng(2);
  const ReceiverParams receiver = ReceiverParams::Init(vocab, Alphabet{10}, 8, rng);
  const Codebook cb = BuildCodebook(vocab, Alphabet{10}, 1);
  const auto pairs = GenerateLanguage(Language::kNoElision, EnumerateMeanings(vocab), cb);
  const double acc =
      CommunicativeAccuracy(receiver, SignalCorpus::FromPairs("x", pairs), vocab);
  EXPECT_GE(acc, 0.0);
  EXPECT_LT(acc, 0.2);
  EXPECT_EQ(CommunicativeAccuracy(receiver, SignalCorpus{}, vocab), 0.0);
}

}  // namespace
}  // namespace anaphor
