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

#include "anaphor/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace anaphor {
namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint IO assumes a little-endian host");

constexpr char kMagic[8] = {'A', 'N', 'P', 'H', 'C', 'K', 'P', 'T'};

class Writer {
 public:
  template <typename T>
  void Pod(T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out_.append(buf, sizeof(T));
  }
  void Str(const std::string& s) {
    Pod<uint32_t>(static_cast<uint32_t>(s.size()));
    out_ += s;
  }
  void Doubles(std::span<const double> xs) {
    out_.append(reinterpret_cast<const char*>(xs.data()), xs.size_bytes());
  }
  std::string Take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(const std::string& in) : in_(in) {}

  void Need(size_t n) const {
    if (pos_ + n > in_.size()) throw std::runtime_error("checkpoint truncated");
  }
  template <typename T>
  T Pod() {
    Need(sizeof(T));
    T v;
    std::memcpy(&v, in_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::string Str() {
    uint32_t n = Pod<uint32_t>();
    Need(n);
    std::string s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  void Doubles(std::span<double> xs) {
    Need(xs.size_bytes());
    std::memcpy(xs.data(), in_.data() + pos_, xs.size_bytes());
    pos_ += xs.size_bytes();
  }
  bool AtEnd() const { return pos_ == in_.size(); }

 private:
  const std::string& in_;
  size_t pos_ = 0;
};

void WriteStore(Writer& w, const std::string& name, const ParamStore& store) {
  w.Str(name);
  w.Pod<int64_t>(store.step());
  w.Pod<uint32_t>(static_cast<uint32_t>(store.size()));
  for (const Parameter& p : store.params()) {
    w.Str(p.name);
    w.Pod<int32_t>(p.value.rows());
    w.Pod<int32_t>(p.value.cols());
    w.Doubles(p.value.data());
    w.Doubles(p.first_moment.data());
    w.Doubles(p.second_moment.data());
  }
}

ParamStore ReadStore(Reader& r) {
  ParamStore store;
  store.set_step(r.Pod<int64_t>());
  uint32_t count = r.Pod<uint32_t>();
  for (uint32_t i = 0; i < count; ++i) {
    std::string name = r.Str();
    int32_t rows = r.Pod<int32_t>();
    int32_t cols = r.Pod<int32_t>();
    if (rows < 0 || cols < 0) throw std::runtime_error("checkpoint: bad shape");
    Tensor value(rows, cols);
    r.Doubles(value.data());
    int idx = store.Add(std::move(name), std::move(value));
    Parameter& p = store.at(idx);
    r.Doubles(p.first_moment.data());
    r.Doubles(p.second_moment.data());
  }
  return store;
}

}  // namespace

const ParamStore& Checkpoint::Store(const std::string& name) const {
  for (const auto& [n, s] : stores) {
    if (n == name) return s;
  }
  throw std::runtime_error("checkpoint has no store '" + name + "'");
}

bool Checkpoint::HasStore(const std::string& name) const {
  for (const auto& entry : stores) {
    if (entry.first == name) return true;
  }
  return false;
}

bool Checkpoint::operator==(const Checkpoint& other) const {
  return stores == other.stores && baseline.mean == other.baseline.mean &&
         baseline.count == other.baseline.count && rng_state == other.rng_state;
}

std::string SerializeCheckpoint(const Checkpoint& ckpt) {
  Writer w;
  for (char c : kMagic) w.Pod<char>(c);
  w.Pod<uint32_t>(kCheckpointVersion);
  w.Pod<uint32_t>(static_cast<uint32_t>(ckpt.stores.size()));
  for (const auto& [name, store] : ckpt.stores) WriteStore(w, name, store);
  w.Pod<double>(ckpt.baseline.mean);
  w.Pod<int64_t>(ckpt.baseline.count);
  w.Str(ckpt.rng_state);
  return w.Take();
}

Checkpoint DeserializeCheckpoint(const std::string& bytes) {
  Reader r(bytes);
  for (char c : kMagic) {
    if (r.Pod<char>() != c) throw std::runtime_error("not a checkpoint file");
  }
  uint32_t version = r.Pod<uint32_t>();
  if (version != kCheckpointVersion) {
    throw std::runtime_error("unsupported checkpoint version " +
                             std::to_string(version));
  }
  Checkpoint ckpt;
  uint32_t count = r.Pod<uint32_t>();
  for (uint32_t i = 0; i < count; ++i) {
    std::string name = r.Str();
    ckpt.stores.emplace_back(std::move(name), ReadStore(r));
  }
  ckpt.baseline.mean = r.Pod<double>();
  ckpt.baseline.count = r.Pod<int64_t>();
  ckpt.rng_state = r.Str();
  if (!r.AtEnd()) throw std::runtime_error("checkpoint has trailing bytes");
  return ckpt;
}

void WriteCheckpoint(const Checkpoint& ckpt, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  std::string bytes = SerializeCheckpoint(ckpt);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

Checkpoint ReadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("missing checkpoint: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return DeserializeCheckpoint(ss.str());
}

void RestoreStore(const ParamStore& src, ParamStore& dst) {
  if (src.size() != dst.size()) {
    throw std::invalid_argument("checkpoint parameter count mismatch");
  }
  for (int i = 0; i < src.size(); ++i) {
    const Parameter& s = src.at(i);
    Parameter& d = dst.at(i);
    if (s.name != d.name || !s.value.SameShape(d.value)) {
      throw std::invalid_argument("checkpoint parameter mismatch at '" + s.name +
                                  "'");
    }
    d.value = s.value;
    d.first_moment = s.first_moment;
    d.second_moment = s.second_moment;
  }
  dst.set_step(src.step());
}

}  // namespace anaphor
