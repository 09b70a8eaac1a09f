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

#ifndef ANAPHOR_MEANINGS_H_
#define ANAPHOR_MEANINGS_H_

// Meaning space of the reconstruction game: two conjoined one-place
// predicates, (subj1, verb1, conj, subj2, verb2).

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "anaphor/rng.h"
#include "json.hpp"

namespace anaphor {

enum class Role : int { kSubj1 = 0, kVerb1 = 1, kConj = 2, kSubj2 = 3, kVerb2 = 4 };
inline constexpr int kNumRoles = 5;
inline constexpr std::array<Role, kNumRoles> kAllRoles = {
    Role::kSubj1, Role::kVerb1, Role::kConj, Role::kSubj2, Role::kVerb2};

std::string_view RoleName(Role role);

// Per-role word inventories. Subject roles share one inventory and verb
// roles share another; the conjunction inventory is always {"and"}.
struct Vocabulary {
  std::vector<std::string> subjects;
  std::vector<std::string> verbs;
  std::vector<std::string> conj = {"and"};

  // Inventories with generated display strings ("s0", "v3", ...).
  static Vocabulary WithSizes(int num_subjects, int num_verbs);

  int num_subjects() const { return static_cast<int>(subjects.size()); }
  int num_verbs() const { return static_cast<int>(verbs.size()); }
  int RoleSize(Role role) const;
  // Offset of a role's one-hot block inside a MeaningVector.
  int BlockOffset(Role role) const;
  // S + V + 1 + S + V.
  int VectorSize() const;

  // Throws std::invalid_argument on empty inventories or a conj inventory
  // that is not exactly one word.
  void Validate() const;

  nlohmann::json ToJson() const;
  static Vocabulary FromJson(const nlohmann::json& j);
};

struct Meaning {
  std::array<int, kNumRoles> words{};

  int operator[](Role role) const { return words[static_cast<int>(role)]; }
  int& operator[](Role role) { return words[static_cast<int>(role)]; }
  auto operator<=>(const Meaning&) const = default;

  static Meaning Of(int subj1, int verb1, int subj2, int verb2) {
    return Meaning{{subj1, verb1, 0, subj2, verb2}};
  }
};

bool IsValidMeaning(const Meaning& m, const Vocabulary& vocab);

// "s1,v1,c,s2,v2".
std::string FormatMeaning(const Meaning& m);
Meaning ParseMeaning(std::string_view text);

enum class RedundancyClass : int {
  kNonRedundant = 0,
  kRedundantSubject = 1,
  kRedundantVerb = 2,
  kFullyRedundant = 3,
};
inline constexpr int kNumRedundancyClasses = 4;

std::string_view RedundancyClassName(RedundancyClass c);
RedundancyClass ParseRedundancyClass(std::string_view name);

RedundancyClass ClassifyRedundancy(const Meaning& m);

inline bool IsRedundant(RedundancyClass c) {
  return c != RedundancyClass::kNonRedundant;
}

// Full cross product, lexicographic by role position.
std::vector<Meaning> EnumerateMeanings(const Vocabulary& vocab);

// Uniform seeded subsample of exactly `size` meanings, returned in canonical
// order. Throws if size exceeds the input.
std::vector<Meaning> SubsampleMeanings(const std::vector<Meaning>& meanings,
                                       size_t size, uint64_t seed);

// Concatenated one-hot blocks in role order.
using MeaningVector = std::vector<double>;

MeaningVector EncodeMeaning(const Meaning& m, const Vocabulary& vocab);
// Writes the encoding into `out` (size VectorSize()), which must be zeroed.
void EncodeMeaningInto(const Meaning& m, const Vocabulary& vocab,
                       std::span<double> out);
// Argmax of every block.
Meaning DecodeMeaning(std::span<const double> vec, const Vocabulary& vocab);

struct DatasetSplit {
  std::vector<Meaning> train;
  std::vector<Meaning> test;
  uint64_t seed = 0;
};

// Deterministic shuffle by seed, then the first round(n * test_fraction)
// meanings form the test set.
DatasetSplit SplitDataset(const std::vector<Meaning>& meanings, uint64_t seed,
                          double test_fraction);

// Uniform with-replacement draws from the training set.
std::vector<Meaning> SampleBatch(const DatasetSplit& split, Rng& rng,
                                 int batch_size);

}  // namespace anaphor

#endif  // ANAPHOR_MEANINGS_H_
