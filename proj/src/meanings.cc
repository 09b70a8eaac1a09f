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

#include "anaphor/meanings.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace anaphor {

std::string_view RoleName(Role role) {
  switch (role) {
    case Role::kSubj1: return "subj1";
    case Role::kVerb1: return "verb1";
    case Role::kConj: return "conj";
    case Role::kSubj2: return "subj2";
    case Role::kVerb2: return "verb2";
  }
  return "?";
}

Vocabulary Vocabulary::WithSizes(int num_subjects, int num_verbs) {
  Vocabulary vocab;
  for (int i = 0; i < num_subjects; ++i) {
    vocab.subjects.push_back("s" + std::to_string(i));
  }
  for (int i = 0; i < num_verbs; ++i) {
    vocab.verbs.push_back("v" + std::to_string(i));
  }
  return vocab;
}

int Vocabulary::RoleSize(Role role) const {
  switch (role) {
    case Role::kSubj1:
    case Role::kSubj2:
      return num_subjects();
    case Role::kVerb1:
    case Role::kVerb2:
      return num_verbs();
    case Role::kConj:
      return 1;
  }
  return 0;
}

int Vocabulary::BlockOffset(Role role) const {
  int offset = 0;
  for (Role r : kAllRoles) {
    if (r == role) break;
    offset += RoleSize(r);
  }
  return offset;
}

int Vocabulary::VectorSize() const {
  return 2 * num_subjects() + 2 * num_verbs() + 1;
}

void Vocabulary::Validate() const {
  if (subjects.empty() || verbs.empty()) {
    throw std::invalid_argument("Vocabulary: empty subject or verb inventory");
  }
  if (conj.size() != 1) {
    throw std::invalid_argument("Vocabulary: conj inventory must hold one word");
  }
}

nlohmann::json Vocabulary::ToJson() const {
  return {{"subjects", subjects}, {"verbs", verbs}, {"conj", conj}};
}

Vocabulary Vocabulary::FromJson(const nlohmann::json& j) {
  Vocabulary vocab;
  vocab.subjects = j.at("subjects").get<std::vector<std::string>>();
  vocab.verbs = j.at("verbs").get<std::vector<std::string>>();
  vocab.conj = j.at("conj").get<std::vector<std::string>>();
  vocab.Validate();
  return vocab;
}

bool IsValidMeaning(const Meaning& m, const Vocabulary& vocab) {
  for (Role role : kAllRoles) {
    if (m[role] < 0 || m[role] >= vocab.RoleSize(role)) return false;
  }
  return true;
}

std::string FormatMeaning(const Meaning& m) {
  std::string out;
  for (int i = 0; i < kNumRoles; ++i) {
    if (i > 0) out += ',';
    out += std::to_string(m.words[i]);
  }
  return out;
}

Meaning ParseMeaning(std::string_view text) {
  Meaning m;
  const char* p = text.data();
  const char* end = text.data() + text.size();
  for (int i = 0; i < kNumRoles; ++i) {
    if (i > 0) {
      if (p == end || *p != ',') {
        throw std::invalid_argument("ParseMeaning: expected 5 integers");
      }
      ++p;
    }
    auto [next, ec] = std::from_chars(p, end, m.words[i]);
    if (ec != std::errc()) {
      throw std::invalid_argument("ParseMeaning: malformed integer");
    }
    p = next;
  }
  if (p != end) throw std::invalid_argument("ParseMeaning: trailing input");
  return m;
}

std::string_view RedundancyClassName(RedundancyClass c) {
  switch (c) {
    case RedundancyClass::kNonRedundant: return "non_redundant";
    case RedundancyClass::kRedundantSubject: return "redundant_subject";
    case RedundancyClass::kRedundantVerb: return "redundant_verb";
    case RedundancyClass::kFullyRedundant: return "fully_redundant";
  }
  return "?";
}

RedundancyClass ParseRedundancyClass(std::string_view name) {
  for (int i = 0; i < kNumRedundancyClasses; ++i) {
    auto c = static_cast<RedundancyClass>(i);
    if (RedundancyClassName(c) == name) return c;
  }
  throw std::invalid_argument("unknown redundancy class: " + std::string(name));
}

RedundancyClass ClassifyRedundancy(const Meaning& m) {
  const bool same_subject = m[Role::kSubj1] == m[Role::kSubj2];
  const bool same_verb = m[Role::kVerb1] == m[Role::kVerb2];
  if (same_subject && same_verb) return RedundancyClass::kFullyRedundant;
  if (same_subject) return RedundancyClass::kRedundantSubject;
  if (same_verb) return RedundancyClass::kRedundantVerb;
  return RedundancyClass::kNonRedundant;
}

std::vector<Meaning> EnumerateMeanings(const Vocabulary& vocab) {
  vocab.Validate();
  const int s = vocab.num_subjects();
  const int v = vocab.num_verbs();
  std::vector<Meaning> out;
  out.reserve(static_cast<size_t>(s) * v * s * v);
  for (int s1 = 0; s1 < s; ++s1) {
    for (int v1 = 0; v1 < v; ++v1) {
      for (int s2 = 0; s2 < s; ++s2) {
        for (int v2 = 0; v2 < v; ++v2) {
          out.push_back(Meaning::Of(s1, v1, s2, v2));
        }
      }
    }
  }
  return out;
}

std::vector<Meaning> SubsampleMeanings(const std::vector<Meaning>& meanings,
                                       size_t size, uint64_t seed) {
  if (size > meanings.size()) {
    throw std::invalid_argument("SubsampleMeanings: size exceeds meaning space");
  }
  std::vector<Meaning> pool = meanings;
  Rng rng(seed);
  Shuffle(pool, rng);
  pool.resize(size);
  std::sort(pool.begin(), pool.end());
  return pool;
}

MeaningVector EncodeMeaning(const Meaning& m, const Vocabulary& vocab) {
  MeaningVector out(static_cast<size_t>(vocab.VectorSize()), 0.0);
  EncodeMeaningInto(m, vocab, out);
  return out;
}

void EncodeMeaningInto(const Meaning& m, const Vocabulary& vocab,
                       std::span<double> out) {
  if (!IsValidMeaning(m, vocab)) {
    throw std::invalid_argument("EncodeMeaning: word index out of range");
  }
  for (Role role : kAllRoles) {
    out[static_cast<size_t>(vocab.BlockOffset(role) + m[role])] = 1.0;
  }
}

Meaning DecodeMeaning(std::span<const double> vec, const Vocabulary& vocab) {
  if (vec.size() != static_cast<size_t>(vocab.VectorSize())) {
    throw std::invalid_argument("DecodeMeaning: vector size mismatch");
  }
  Meaning m;
  for (Role role : kAllRoles) {
    auto block = vec.subspan(static_cast<size_t>(vocab.BlockOffset(role)),
                             static_cast<size_t>(vocab.RoleSize(role)));
    m[role] = static_cast<int>(std::max_element(block.begin(), block.end()) -
                               block.begin());
  }
  return m;
}

DatasetSplit SplitDataset(const std::vector<Meaning>& meanings, uint64_t seed,
                          double test_fraction) {
  if (meanings.empty()) {
    throw std::invalid_argument("SplitDataset: empty meaning list");
  }
  if (!(test_fraction >= 0.0 && test_fraction < 1.0)) {
    throw std::invalid_argument("SplitDataset: test_fraction must be in [0, 1)");
  }
  std::vector<Meaning> pool = meanings;
  Rng rng(seed);
  Shuffle(pool, rng);
  const auto num_test = static_cast<size_t>(
      std::llround(static_cast<double>(pool.size()) * test_fraction));
  DatasetSplit split;
  split.seed = seed;
  split.test.assign(pool.begin(), pool.begin() + static_cast<long>(num_test));
  split.train.assign(pool.begin() + static_cast<long>(num_test), pool.end());
  return split;
}

std::vector<Meaning> SampleBatch(const DatasetSplit& split, Rng& rng,
                                 int batch_size) {
  if (batch_size < 1) throw std::invalid_argument("SampleBatch: batch_size < 1");
  if (split.train.empty()) throw std::invalid_argument("SampleBatch: empty train set");
  std::vector<Meaning> batch;
  batch.reserve(static_cast<size_t>(batch_size));
  for (int i = 0; i < batch_size; ++i) {
    batch.push_back(split.train[rng.UniformInt(split.train.size())]);
  }
  return batch;
}

}  // namespace anaphor
