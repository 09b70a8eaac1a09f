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

#ifndef ANAPHOR_CHECKPOINT_H_
#define ANAPHOR_CHECKPOINT_H_

// Versioned binary snapshots of agent parameters, Adam state, the REINFORCE
// baseline and the run's generator state.
//
// Layout (little-endian): magic "ANPHCKPT", u32 version, u32 store count,
// then per store: string name, i64 step, u32 parameter count and per
// parameter: string name, i32 rows, i32 cols, value, first moment, second
// moment (rows*cols f64 each). Trailer: f64 baseline mean, i64 baseline
// count, string rng state. Strings are u32 length + bytes.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "anaphor/agents.h"
#include "anaphor/params.h"

namespace anaphor {

inline constexpr uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  // Named stores, e.g. {"sender", ...}, {"receiver", ...}.
  std::vector<std::pair<std::string, ParamStore>> stores;
  Baseline baseline;
  std::string rng_state;

  const ParamStore& Store(const std::string& name) const;
  bool HasStore(const std::string& name) const;
  bool operator==(const Checkpoint& other) const;
};

std::string SerializeCheckpoint(const Checkpoint& ckpt);
// Throws std::runtime_error on a bad magic, an unknown version or truncation.
Checkpoint DeserializeCheckpoint(const std::string& bytes);

void WriteCheckpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint ReadCheckpoint(const std::string& path);

// Copies values, moments and step from `src` into `dst`. Both must hold the
// same parameter names and shapes in the same order.
void RestoreStore(const ParamStore& src, ParamStore& dst);

}  // namespace anaphor

#endif  // ANAPHOR_CHECKPOINT_H_
