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

#include "anaphor/handcrafted.h"

#include <algorithm>
#include <set>
#include <string>

#include "gtest/gtest.h"

namespace anaphor {
namespace {

const std::string kFigure3 = std::string(ANAPHOR_DATA_DIR) + "/figure3_codebook.json";

class Figure3Test : public ::testing::Test {
 protected:
  void SetUp() override { file_ = ReadCodebookFile(kFigure3); }
  CodebookFile file_;
  const Meaning john_smiles_twice_ = Meaning::Of(0, 0, 0, 0);
};

TEST_F(Figure3Test, FixtureLoads) {
  EXPECT_EQ(file_.vocab.subjects, std::vector<std::string>{"John"});
  EXPECT_EQ(file_.codebook.conj, (Code{1, 3}));
  EXPECT_FALSE(IsPrefixFree(file_.codebook));
}

TEST_F(Figure3Test, NoElision) {
  const auto seg = EncodeSegments(Language::kNoElision, john_smiles_twice_, file_.codebook);
  EXPECT_EQ(FormatSegments(seg), "12 34 13 12 34 0");
  EXPECT_EQ(EncodeNoElision(john_smiles_twice_, file_.codebook),
            (Signal{1, 2, 3, 4, 1, 3, 1, 2, 3, 4, 0}));
}

TEST_F(Figure3Test, Pronoun) {
  const auto seg = EncodeSegments(Language::kPronoun, john_smiles_twice_, file_.codebook);
  EXPECT_EQ(FormatSegments(seg), "12 34 13 1 2 0");
  EXPECT_EQ(EncodePronoun(john_smiles_twice_, file_.codebook),
            (Signal{1, 2, 3, 4, 1, 3, 1, 2, 0}));
}

TEST_F(Figure3Test, Prodrop) {
  const auto seg = EncodeSegments(Language::kProdrop, john_smiles_twice_, file_.codebook);
  EXPECT_EQ(FormatSegments(seg), "12 34 13 0");
  EXPECT_EQ(EncodeProdrop(john_smiles_twice_, file_.codebook),
            (Signal{1, 2, 3, 4, 1, 3, 0}));
}

TEST_F(Figure3Test, SignalsDecode) {
  for (Language lang : kAllLanguages) {
    const auto m = DecodeLanguageSignal(lang, Encode(lang, john_smiles_twice_, file_.codebook),
                                        file_.codebook);
    ASSERT_TRUE(m.has_value()) << LanguageName(lang);
    EXPECT_EQ(*m, john_smiles_twice_);
  }
}

TEST(CodebookTest, DeterministicPrefixFree) {
  const Vocabulary vocab = Vocabulary::WithSizes(15, 15);
  const Codebook a = BuildCodebook(vocab, Alphabet{26}, 3);
  const Codebook b = BuildCodebook(vocab, Alphabet{26}, 3);
  EXPECT_EQ(a.ToJson(), b.ToJson());
  EXPECT_NE(a.ToJson(), BuildCodebook(vocab, Alphabet{26}, 4).ToJson());
  EXPECT_TRUE(IsPrefixFree(a));
  for (const Code& c : a.subjects) EXPECT_EQ(c.size(), 2u);
  for (const Code& c : a.verbs) EXPECT_EQ(c.size(), 2u);
  EXPECT_EQ(a.pronoun.size(), 1u);
  EXPECT_EQ(a.did_too.size(), 1u);
  std::set<int> word_symbols;
  for (const Code& c : a.subjects) word_symbols.insert(c.begin(), c.end());
  for (const Code& c : a.verbs) word_symbols.insert(c.begin(), c.end());
  EXPECT_EQ(word_symbols.count(a.pronoun[0]), 0u);
  EXPECT_EQ(word_symbols.count(a.did_too[0]), 0u);
}

TEST(CodebookTest, AlphabetTooSmall) {
  const Vocabulary vocab = Vocabulary::WithSizes(15, 15);
  EXPECT_THROW(BuildCodebook(vocab, Alphabet{5}, 1), std::invalid_argument);
  EXPECT_THROW(BuildCodebook(vocab, Alphabet{5}, 1, CodebookMode::kOverlapping),
               std::invalid_argument);
}

TEST(CodebookTest, JsonRoundTrip) {
  const Vocabulary vocab = Vocabulary::WithSizes(4, 5);
  for (CodebookMode mode : {CodebookMode::kPrefixFree, CodebookMode::kOverlapping}) {
    const Codebook cb = BuildCodebook(vocab, Alphabet{26}, 8, mode);
    EXPECT_EQ(Codebook::FromJson(cb.ToJson()).ToJson(), cb.ToJson());
  }
}

TEST(CodebookTest, ValidationRejectsBadCodes) {
  const Vocabulary vocab = Vocabulary::WithSizes(2, 2);
  Codebook cb = BuildCodebook(vocab, Alphabet{10}, 1);
  Codebook dup = cb;
  dup.verbs[0] = dup.subjects[0];
  EXPECT_THROW(ValidateCodebook(dup, vocab), std::invalid_argument);
  Codebook out_of_range = cb;
  out_of_range.conj = {11, 1};
  EXPECT_THROW(ValidateCodebook(out_of_range, vocab), std::invalid_argument);
  Codebook eos = cb;
  eos.pronoun = {kEos};
  EXPECT_THROW(ValidateCodebook(eos, vocab), std::invalid_argument);
  EXPECT_THROW(ValidateCodebook(cb, Vocabulary::WithSizes(3, 2)), std::invalid_argument);
}

class LanguageTest : public ::testing::TestWithParam<CodebookMode> {
 protected:
  const Vocabulary vocab_ = Vocabulary::WithSizes(15, 15);
  const std::vector<Meaning> all_ = EnumerateMeanings(vocab_);
  const Codebook cb_ = BuildCodebook(vocab_, Alphabet{26}, 5, GetParam());
};

TEST_P(LanguageTest, InjectiveAndDecodable) {
  for (Language lang : kAllLanguages) {
    std::set<Signal> seen;
    for (const auto& [m, s] : GenerateLanguage(lang, all_, cb_)) {
      ASSERT_TRUE(seen.insert(s).second) << LanguageName(lang);
      const auto back = DecodeLanguageSignal(lang, s, cb_);
      ASSERT_TRUE(back.has_value()) << LanguageName(lang) << " " << FormatSignal(s);
      ASSERT_EQ(*back, m);
    }
  }
}

TEST_P(LanguageTest, LengthRelations) {
  const auto ne = GenerateLanguage(Language::kNoElision, all_, cb_);
  const auto pd = GenerateLanguage(Language::kProdrop, all_, cb_);
  for (size_t i = 0; i < all_.size(); ++i) {
    EXPECT_EQ(ne[i].second.size(), 11u);
    if (ClassifyRedundancy(all_[i]) == RedundancyClass::kFullyRedundant) {
      EXPECT_EQ(ne[i].second.size() - pd[i].second.size(), 4u);
    }
  }
}

TEST_P(LanguageTest, ElisionRules) {
  const Meaning mary_walks_mary_smiles = Meaning::Of(1, 0, 1, 1);
  Signal expected_pronoun;
  for (const Code* c : {&cb_.subjects[1], &cb_.verbs[0], &cb_.conj, &cb_.pronoun, &cb_.verbs[1]}) {
    expected_pronoun.insert(expected_pronoun.end(), c->begin(), c->end());
  }
  expected_pronoun.push_back(kEos);
  EXPECT_EQ(EncodePronoun(mary_walks_mary_smiles, cb_), expected_pronoun);
  Signal expected_prodrop;
  for (const Code* c : {&cb_.subjects[1], &cb_.verbs[0], &cb_.conj, &cb_.verbs[1]}) {
    expected_prodrop.insert(expected_prodrop.end(), c->begin(), c->end());
  }
  expected_prodrop.push_back(kEos);
  EXPECT_EQ(EncodeProdrop(mary_walks_mary_smiles, cb_), expected_prodrop);
  const Meaning plain = Meaning::Of(0, 1, 2, 3);
  EXPECT_EQ(EncodePronoun(plain, cb_), EncodeNoElision(plain, cb_));
  EXPECT_EQ(EncodeProdrop(plain, cb_), EncodeNoElision(plain, cb_));
}

TEST(PronounSymbolsTest, OccurIffRedundant) {
  const Vocabulary vocab = Vocabulary::WithSizes(15, 15);
  const Codebook cb = BuildCodebook(vocab, Alphabet{26}, 6);
  for (const auto& [m, s] : GenerateLanguage(Language::kPronoun, EnumerateMeanings(vocab), cb)) {
    const bool has_p = std::find(s.begin(), s.end(), cb.pronoun[0]) != s.end();
    const bool has_d = std::find(s.begin(), s.end(), cb.did_too[0]) != s.end();
    ASSERT_EQ(has_p, m[Role::kSubj1] == m[Role::kSubj2]);
    ASSERT_EQ(has_d, m[Role::kVerb1] == m[Role::kVerb2]);
  }
}

INSTANTIATE_TEST_SUITE_P(Modes, LanguageTest,
                         ::testing::Values(CodebookMode::kPrefixFree,
                                           CodebookMode::kOverlapping),
                         [](const auto& info) {
                           return std::string(CodebookModeName(info.param));
                         });

TEST(LanguageNameTest, RoundTrip) {
  for (Language lang : kAllLanguages) EXPECT_EQ(ParseLanguage(LanguageName(lang)), lang);
  EXPECT_THROW(ParseLanguage("pro-drop"), std::invalid_argument);
}

}  // namespace
}  // namespace anaphor
