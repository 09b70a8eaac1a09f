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
#include <fstream>
#include <numeric>
#include <set>
#include <stdexcept>

#include "anaphor/rng.h"

namespace anaphor {

std::string_view CodebookModeName(CodebookMode mode) {
  return mode == CodebookMode::kPrefixFree ? "prefix_free" : "overlapping";
}

CodebookMode ParseCodebookMode(std::string_view name) {
  if (name == "prefix_free") return CodebookMode::kPrefixFree;
  if (name == "overlapping") return CodebookMode::kOverlapping;
  throw std::invalid_argument("unknown codebook mode: " + std::string(name));
}

const Code& Codebook::WordCode(Role role, int word) const {
  switch (role) {
    case Role::kSubj1:
    case Role::kSubj2:
      return subjects.at(static_cast<size_t>(word));
    case Role::kVerb1:
    case Role::kVerb2:
      return verbs.at(static_cast<size_t>(word));
    case Role::kConj:
      return conj;
  }
  throw std::invalid_argument("WordCode: bad role");
}

nlohmann::json Codebook::ToJson() const {
  return {{"mode", CodebookModeName(mode)},
          {"alphabet_size", alphabet_size},
          {"subjects", subjects},
          {"verbs", verbs},
          {"conj", conj},
          {"pronoun", pronoun},
          {"did_too", did_too}};
}

Codebook Codebook::FromJson(const nlohmann::json& j) {
  Codebook cb;
  cb.mode = ParseCodebookMode(j.value("mode", std::string("prefix_free")));
  cb.alphabet_size = j.at("alphabet_size").get<int>();
  cb.subjects = j.at("subjects").get<std::vector<Code>>();
  cb.verbs = j.at("verbs").get<std::vector<Code>>();
  cb.conj = j.at("conj").get<Code>();
  cb.pronoun = j.at("pronoun").get<Code>();
  cb.did_too = j.at("did_too").get<Code>();
  return cb;
}

void ValidateCodebook(const Codebook& cb, const Vocabulary& vocab) {
  if (static_cast<int>(cb.subjects.size()) != vocab.num_subjects() ||
      static_cast<int>(cb.verbs.size()) != vocab.num_verbs()) {
    throw std::invalid_argument("codebook inventory sizes differ from vocabulary");
  }
  auto check = [&](const Code& code, const char* what) {
    if (code.empty()) throw std::invalid_argument(std::string(what) + ": empty code");
    for (int sym : code) {
      if (sym < 1 || sym > cb.alphabet_size) {
        throw std::invalid_argument(std::string(what) + ": symbol " +
                                    std::to_string(sym) + " outside alphabet");
      }
    }
  };
  std::set<Code> seen;
  auto check_word = [&](const Code& code, const char* what) {
    check(code, what);
    if (!seen.insert(code).second) {
      throw std::invalid_argument(std::string(what) + ": duplicate code");
    }
  };
  for (const Code& c : cb.subjects) check_word(c, "subject");
  for (const Code& c : cb.verbs) check_word(c, "verb");
  check_word(cb.conj, "conj");
  check(cb.pronoun, "pronoun");
  check(cb.did_too, "did_too");
  if (cb.pronoun == cb.did_too) {
    throw std::invalid_argument("pronoun and did_too codes coincide");
  }
}

nlohmann::json CodebookFile::ToJson() const {
  return {{"vocabulary", vocab.ToJson()}, {"codebook", codebook.ToJson()}};
}

CodebookFile CodebookFile::FromJson(const nlohmann::json& j) {
  CodebookFile f;
  f.vocab = Vocabulary::FromJson(j.at("vocabulary"));
  f.codebook = Codebook::FromJson(j.at("codebook"));
  ValidateCodebook(f.codebook, f.vocab);
  return f;
}

CodebookFile ReadCodebookFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read codebook file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("codebook file " + path + ": " + e.what());
  }
  return CodebookFile::FromJson(j);
}

void WriteCodebookFile(const CodebookFile& file, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write codebook file " + path);
  out << file.ToJson().dump(2) << '\n';
}

bool IsPrefixFree(const Codebook& cb) {
  std::vector<const Code*> all;
  for (const Code& c : cb.subjects) all.push_back(&c);
  for (const Code& c : cb.verbs) all.push_back(&c);
  all.push_back(&cb.conj);
  all.push_back(&cb.pronoun);
  all.push_back(&cb.did_too);
  for (size_t i = 0; i < all.size(); ++i) {
    for (size_t j = 0; j < all.size(); ++j) {
      if (i == j) continue;
      const Code& a = *all[i];
      const Code& b = *all[j];
      if (a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin())) {
        return false;
      }
    }
  }
  return true;
}

namespace {

Codebook BuildPrefixFree(const Vocabulary& vocab, const Alphabet& alphabet,
                         uint64_t seed) {
  const int needed = vocab.num_subjects() + vocab.num_verbs() + 1;
  const int pool_size = alphabet.size - 2;
  if (pool_size < 1 || pool_size * pool_size < needed) {
    throw std::invalid_argument(
        "alphabet of " + std::to_string(alphabet.size) +
        " symbols cannot give " + std::to_string(needed) +
        " distinct 2-symbol codes plus two reserved anaphor symbols");
  }
  Rng rng(seed);
  std::vector<int> symbols(static_cast<size_t>(alphabet.size));
  std::iota(symbols.begin(), symbols.end(), 1);
  Shuffle(symbols, rng);

  Codebook cb;
  cb.mode = CodebookMode::kPrefixFree;
  cb.alphabet_size = alphabet.size;
  cb.pronoun = {symbols[0]};
  cb.did_too = {symbols[1]};
  std::vector<Code> pairs;
  for (int i = 2; i < alphabet.size; ++i) {
    for (int j = 2; j < alphabet.size; ++j) {
      pairs.push_back({symbols[static_cast<size_t>(i)], symbols[static_cast<size_t>(j)]});
    }
  }
  Shuffle(pairs, rng);
  size_t next = 0;
  for (int i = 0; i < vocab.num_subjects(); ++i) cb.subjects.push_back(pairs[next++]);
  for (int i = 0; i < vocab.num_verbs(); ++i) cb.verbs.push_back(pairs[next++]);
  cb.conj = pairs[next++];
  return cb;
}

// Word codes are (head, tail) pairs. Subjects and verbs draw their heads from
// one shared pool and carry a role-specific tail; the conjunction has its own
// two symbols, and the anaphor codes reuse the two tails.
Codebook BuildOverlapping(const Vocabulary& vocab, const Alphabet& alphabet,
                          uint64_t seed) {
  const int heads = std::max(vocab.num_subjects(), vocab.num_verbs());
  const int needed = heads + 4;
  if (alphabet.size < needed) {
    throw std::invalid_argument("overlapping codebook needs " +
                                std::to_string(needed) + " symbols, alphabet has " +
                                std::to_string(alphabet.size));
  }
  Rng rng(seed);
  std::vector<int> symbols(static_cast<size_t>(alphabet.size));
  std::iota(symbols.begin(), symbols.end(), 1);
  Shuffle(symbols, rng);
  const int subject_tail = symbols[0];
  const int verb_tail = symbols[1];

  Codebook cb;
  cb.mode = CodebookMode::kOverlapping;
  cb.alphabet_size = alphabet.size;
  cb.conj = {symbols[2], symbols[3]};
  for (int i = 0; i < vocab.num_subjects(); ++i) {
    cb.subjects.push_back({symbols[static_cast<size_t>(4 + i)], subject_tail});
  }
  for (int i = 0; i < vocab.num_verbs(); ++i) {
    cb.verbs.push_back({symbols[static_cast<size_t>(4 + i)], verb_tail});
  }
  cb.pronoun = {verb_tail};
  cb.did_too = {subject_tail};
  return cb;
}

}  // namespace

Codebook BuildCodebook(const Vocabulary& vocab, const Alphabet& alphabet,
                       uint64_t seed, CodebookMode mode) {
  vocab.Validate();
  Codebook cb = mode == CodebookMode::kPrefixFree
                    ? BuildPrefixFree(vocab, alphabet, seed)
                    : BuildOverlapping(vocab, alphabet, seed);
  ValidateCodebook(cb, vocab);
  return cb;
}

std::string_view LanguageName(Language lang) {
  switch (lang) {
    case Language::kNoElision: return "no_elision";
    case Language::kPronoun: return "pronoun";
    case Language::kProdrop: return "prodrop";
  }
  return "?";
}

Language ParseLanguage(std::string_view name) {
  for (Language lang : kAllLanguages) {
    if (LanguageName(lang) == name) return lang;
  }
  throw std::invalid_argument("unknown language: " + std::string(name));
}

std::vector<Code> EncodeSegments(Language lang, const Meaning& m,
                                 const Codebook& cb) {
  std::vector<Code> out;
  out.reserve(6);
  out.push_back(cb.WordCode(Role::kSubj1, m[Role::kSubj1]));
  out.push_back(cb.WordCode(Role::kVerb1, m[Role::kVerb1]));
  out.push_back(cb.conj);
  const bool same_subject = m[Role::kSubj1] == m[Role::kSubj2];
  const bool same_verb = m[Role::kVerb1] == m[Role::kVerb2];
  switch (lang) {
    case Language::kNoElision:
      out.push_back(cb.WordCode(Role::kSubj2, m[Role::kSubj2]));
      out.push_back(cb.WordCode(Role::kVerb2, m[Role::kVerb2]));
      break;
    case Language::kPronoun:
      out.push_back(same_subject ? cb.pronoun : cb.WordCode(Role::kSubj2, m[Role::kSubj2]));
      out.push_back(same_verb ? cb.did_too : cb.WordCode(Role::kVerb2, m[Role::kVerb2]));
      break;
    case Language::kProdrop:
      if (!same_subject) out.push_back(cb.WordCode(Role::kSubj2, m[Role::kSubj2]));
      if (!same_verb) out.push_back(cb.WordCode(Role::kVerb2, m[Role::kVerb2]));
      break;
  }
  out.push_back({kEos});
  return out;
}

Signal Encode(Language lang, const Meaning& m, const Codebook& cb) {
  Signal s;
  for (const Code& code : EncodeSegments(lang, m, cb)) {
    s.insert(s.end(), code.begin(), code.end());
  }
  return s;
}

Signal EncodeNoElision(const Meaning& m, const Codebook& cb) {
  return Encode(Language::kNoElision, m, cb);
}
Signal EncodePronoun(const Meaning& m, const Codebook& cb) {
  return Encode(Language::kPronoun, m, cb);
}
Signal EncodeProdrop(const Meaning& m, const Codebook& cb) {
  return Encode(Language::kProdrop, m, cb);
}

std::string FormatSegments(const std::vector<Code>& segments) {
  std::string out;
  for (size_t i = 0; i < segments.size(); ++i) {
    if (i > 0) out += ' ';
    for (int sym : segments[i]) out += std::to_string(sym);
  }
  return out;
}

std::vector<std::pair<Meaning, Signal>> GenerateLanguage(
    Language lang, const std::vector<Meaning>& meanings, const Codebook& cb) {
  std::vector<std::pair<Meaning, Signal>> out;
  out.reserve(meanings.size());
  for (const Meaning& m : meanings) out.emplace_back(m, Encode(lang, m, cb));
  return out;
}

namespace {

bool MatchAt(const Signal& s, size_t pos, const Code& code) {
  return pos + code.size() <= s.size() &&
         std::equal(code.begin(), code.end(), s.begin() + static_cast<long>(pos));
}

class SignalParser {
 public:
  SignalParser(Language lang, const Signal& s, const Codebook& cb, int limit)
      : lang_(lang), s_(s), cb_(cb), limit_(limit) {}

  std::vector<Meaning> Run() {
    Meaning m;
    Slot(0, 0, m);
    return std::move(found_);
  }

 private:
  // Slots: 0 subj1, 1 verb1, 2 conj, 3 second subject, 4 second verb, 5 EOS.
  void Slot(int slot, size_t pos, Meaning& m) {
    if (static_cast<int>(found_.size()) >= limit_) return;
    switch (slot) {
      case 0:
        Words(cb_.subjects, Role::kSubj1, 1, pos, m);
        return;
      case 1:
        Words(cb_.verbs, Role::kVerb1, 2, pos, m);
        return;
      case 2:
        if (MatchAt(s_, pos, cb_.conj)) {
          m[Role::kConj] = 0;
          Slot(3, pos + cb_.conj.size(), m);
        }
        return;
      case 3:
        Second(Role::kSubj1, Role::kSubj2, cb_.subjects, cb_.pronoun, 4, pos, m);
        return;
      case 4:
        Second(Role::kVerb1, Role::kVerb2, cb_.verbs, cb_.did_too, 5, pos, m);
        return;
      default:
        if (pos + 1 == s_.size() && s_[pos] == kEos) found_.push_back(m);
        return;
    }
  }

  void Words(const std::vector<Code>& codes, Role role, int next, size_t pos,
             Meaning& m) {
    for (size_t w = 0; w < codes.size(); ++w) {
      if (MatchAt(s_, pos, codes[w])) {
        m[role] = static_cast<int>(w);
        Slot(next, pos + codes[w].size(), m);
      }
    }
  }

  // Second conjunct slot: an overt word that differs from its antecedent,
  // or the anaphoric realisation of a repeated word.
  void Second(Role antecedent, Role role, const std::vector<Code>& codes,
              const Code& anaphor, int next, size_t pos, Meaning& m) {
    for (size_t w = 0; w < codes.size(); ++w) {
      const bool repeat = static_cast<int>(w) == m[antecedent];
      if (repeat && lang_ != Language::kNoElision) continue;
      if (MatchAt(s_, pos, codes[w])) {
        m[role] = static_cast<int>(w);
        Slot(next, pos + codes[w].size(), m);
      }
    }
    if (lang_ == Language::kPronoun && MatchAt(s_, pos, anaphor)) {
      m[role] = m[antecedent];
      Slot(next, pos + anaphor.size(), m);
    } else if (lang_ == Language::kProdrop) {
      m[role] = m[antecedent];
      Slot(next, pos, m);
    }
  }

  Language lang_;
  const Signal& s_;
  const Codebook& cb_;
  int limit_;
  std::vector<Meaning> found_;
};

}  // namespace

std::vector<Meaning> ParseLanguageSignal(Language lang, const Signal& signal,
                                         const Codebook& cb, int limit) {
  return SignalParser(lang, signal, cb, limit).Run();
}

std::optional<Meaning> DecodeLanguageSignal(Language lang, const Signal& signal,
                                            const Codebook& cb) {
  auto parses = ParseLanguageSignal(lang, signal, cb, 2);
  if (parses.size() != 1) return std::nullopt;
  return parses.front();
}

}  // namespace anaphor
