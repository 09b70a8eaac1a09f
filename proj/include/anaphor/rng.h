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

#ifndef ANAPHOR_RNG_H_
#define ANAPHOR_RNG_H_

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace anaphor {

// Seeded generator with platform-independent derived distributions. The
// engine is std::mt19937_64, whose output sequence is fixed by the standard;
// the uniform helpers below avoid the implementation-defined std::
// distributions so that draws agree across standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed = 0) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of resolution.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer on [0, n). Rejection sampling, no modulo bias.
  uint64_t UniformInt(uint64_t n);

  // Derives an independent stream, e.g. one per role of a run.
  Rng Fork(uint64_t stream);

  // Textual engine state, as defined by the standard's operator<<.
  std::string SerializeState() const;
  void RestoreState(const std::string& state);

  bool operator==(const Rng& other) const { return engine_ == other.engine_; }

 private:
  std::mt19937_64 engine_;
};

// Fisher-Yates with Rng::UniformInt.
template <typename T>
void Shuffle(std::vector<T>& items, Rng& rng) {
  for (size_t i = items.size(); i > 1; --i) {
    size_t j = static_cast<size_t>(rng.UniformInt(i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace anaphor

#endif  // ANAPHOR_RNG_H_
