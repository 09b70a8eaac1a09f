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

#ifndef ANAPHOR_HANDCRAFTED_H_
#define ANAPHOR_HANDCRAFTED_H_

// Handcrafted languages: No Elision, Pronoun, and Pro-drop encodings of the
// meaning space through a fixed codebook.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "anaphor/meanings.h"
#include "anaphor/signal.h"
#include "json.hpp"

namespace anaphor {

using Code = std::vector<int>;

enum class CodebookMode {
  // Strictly prefix-free; anaphor symbols occur in no word code.
  kPrefixFree,
  // Word codes share symbols with the anaphor codes and with one another,
  // so that individual characters are used across meaning types.
  kOverlapping,
};

std::string_view CodebookModeName(CodebookMode mode);
CodebookMode ParseCodebookMode(std::string_view name);

struct Codebook {
  CodebookMode mode = CodebookMode::kPrefixFree;
  int alphabet_size = 26;
  std::vector<Code> subjects;
  std::vector<Code> verbs;
  Code conj;
  Code pronoun;
  Code did_too;

  const Code& WordCode(Role role, int word) const;

  nlohmann::json ToJson() const;
  static Codebook FromJson(const nlohmann::json& j);
};

// Structural checks against a vocabulary: inventory sizes, non-empty codes,
// symbols in 1..alphabet_size, distinct word codes. Throws
// std::invalid_argument.
void ValidateCodebook(const Codebook& cb, const Vocabulary& vocab);

// A codebook together with the vocabulary it covers, as stored on disk:
// {"vocabulary": {...}, "codebook": {...}}.
struct CodebookFile {
  Vocabulary vocab;
  Codebook codebook;

  nlohmann::json ToJson() const;
  static CodebookFile FromJson(const nlohmann::json& j);
};

// Reads and validates a codebook file.
CodebookFile ReadCodebookFile(const std::string& path);
void WriteCodebookFile(const CodebookFile& file, const std::string& path);

// True when no code (words, conj, anaphors) is a proper prefix of another
// and no two codes are equal.
bool IsPrefixFree(const Codebook& cb);

// Deterministic from seed. Every word and the conjunction get a 2-symbol
// code; PRONOUN and DIDTOO get one symbol each. Throws std::invalid_argument
// when the alphabet cannot supply enough distinct codes.
Codebook BuildCodebook(const Vocabulary& vocab, const Alphabet& alphabet,
                       uint64_t seed,
                       CodebookMode mode = CodebookMode::kPrefixFree);

enum class Language { kNoElision, kPronoun, kProdrop };
inline constexpr Language kAllLanguages[] = {Language::kNoElision,
                                             Language::kPronoun,
                                             Language::kProdrop};

std::string_view LanguageName(Language lang);
Language ParseLanguage(std::string_view name);

// Code sequence for a meaning, ending with the EOS code {0}.
std::vector<Code> EncodeSegments(Language lang, const Meaning& m,
                                 const Codebook& cb);
Signal Encode(Language lang, const Meaning& m, const Codebook& cb);
Signal EncodeNoElision(const Meaning& m, const Codebook& cb);
Signal EncodePronoun(const Meaning& m, const Codebook& cb);
Signal EncodeProdrop(const Meaning& m, const Codebook& cb);

// Codes separated by spaces, the symbols of one code written back to back:
// {{1,2},{3,4},{0}} -> "12 34 0".
std::string FormatSegments(const std::vector<Code>& segments);

std::vector<std::pair<Meaning, Signal>> GenerateLanguage(
    Language lang, const std::vector<Meaning>& meanings, const Codebook& cb);

// Every meaning whose encoding under `lang` equals `signal` (at most
// `limit`). Backtracks over code boundaries, so it also handles codebooks
// that are not prefix-free.
std::vector<Meaning> ParseLanguageSignal(Language lang, const Signal& signal,
                                         const Codebook& cb, int limit = 2);
// The unique parse, if there is exactly one.
std::optional<Meaning> DecodeLanguageSignal(Language lang, const Signal& signal,
                                            const Codebook& cb);

}  // namespace anaphor

#endif  // ANAPHOR_HANDCRAFTED_H_
