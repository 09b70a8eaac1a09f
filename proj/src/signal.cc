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

#include "anaphor/signal.h"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace anaphor {

int SignalLength(const Signal& s) {
  auto it = std::find(s.begin(), s.end(), kEos);
  return static_cast<int>(it - s.begin());
}

void ValidateSignal(const Signal& s, const Alphabet& alphabet, int max_len) {
  if (s.empty() || s.back() != kEos) {
    throw std::invalid_argument("signal must end with EOS");
  }
  if (std::count(s.begin(), s.end(), kEos) != 1) {
    throw std::invalid_argument("signal must contain exactly one EOS");
  }
  for (int sym : s) {
    if (sym < 0 || sym > alphabet.size) {
      throw std::invalid_argument("symbol id " + std::to_string(sym) +
                                  " out of range");
    }
  }
  if (max_len >= 0 && static_cast<int>(s.size()) - 1 > max_len) {
    throw std::invalid_argument("signal longer than max_len");
  }
}

std::string FormatSignal(const Signal& s) {
  std::string out;
  for (size_t i = 0; i < s.size(); ++i) {
    if (i > 0) out += ' ';
    out += std::to_string(s[i]);
  }
  return out;
}

Signal ParseSignal(std::string_view text) {
  Signal s;
  const char* p = text.data();
  const char* end = p + text.size();
  while (p != end) {
    if (*p == ' ') {
      ++p;
      continue;
    }
    int sym = 0;
    auto [next, ec] = std::from_chars(p, end, sym);
    if (ec != std::errc()) throw std::invalid_argument("ParseSignal: malformed symbol");
    s.push_back(sym);
    p = next;
  }
  return s;
}

}  // namespace anaphor
