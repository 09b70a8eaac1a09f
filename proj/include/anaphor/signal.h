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

#ifndef ANAPHOR_SIGNAL_H_
#define ANAPHOR_SIGNAL_H_

#include <string>
#include <string_view>
#include <vector>

namespace anaphor {

inline constexpr int kEos = 0;

// Ordinary symbols are 1..size; id 0 is EOS.
struct Alphabet {
  int size = 26;
  int total() const { return size + 1; }
};

// Symbol sequence whose last element is the single EOS.
using Signal = std::vector<int>;

// Number of symbols before the first EOS.
int SignalLength(const Signal& s);

// Throws std::invalid_argument unless `s` ends in its only EOS and every
// symbol lies in [0, alphabet.size]. max_len < 0 disables the length bound,
// which otherwise applies to the symbols before EOS.
void ValidateSignal(const Signal& s, const Alphabet& alphabet, int max_len = -1);

// "5 7 0".
std::string FormatSignal(const Signal& s);
Signal ParseSignal(std::string_view text);

}  // namespace anaphor

#endif  // ANAPHOR_SIGNAL_H_
