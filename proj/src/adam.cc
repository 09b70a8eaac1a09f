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

#include <cmath>
#include <stdexcept>

#include "anaphor/params.h"

namespace anaphor {

int ParamStore::Add(std::string name, Tensor init) {
  if (Contains(name)) {
    throw std::invalid_argument("ParamStore: duplicate parameter " + name);
  }
  Parameter p;
  p.first_moment = Tensor(init.rows(), init.cols());
  p.second_moment = Tensor(init.rows(), init.cols());
  p.name = std::move(name);
  p.value = std::move(init);
  params_.push_back(std::move(p));
  return size() - 1;
}

int ParamStore::IndexOf(std::string_view name) const {
  for (size_t i = 0; i < params_.size(); ++i) {
    if (params_[i].name == name) return static_cast<int>(i);
  }
  throw std::out_of_range("ParamStore: no parameter " + std::string(name));
}

bool ParamStore::Contains(std::string_view name) const {
  for (const auto& p : params_) {
    if (p.name == name) return true;
  }
  return false;
}

std::vector<Tensor> ParamStore::ZeroGrads() const {
  std::vector<Tensor> grads;
  grads.reserve(params_.size());
  for (const auto& p : params_) grads.emplace_back(p.value.rows(), p.value.cols());
  return grads;
}

size_t ParamStore::NumScalars() const {
  size_t n = 0;
  for (const auto& p : params_) n += p.value.size();
  return n;
}

bool ParamStore::operator==(const ParamStore& other) const {
  if (step_ != other.step_ || params_.size() != other.params_.size()) return false;
  for (size_t i = 0; i < params_.size(); ++i) {
    const auto& a = params_[i];
    const auto& b = other.params_[i];
    if (a.name != b.name || !(a.value == b.value) ||
        !(a.first_moment == b.first_moment) ||
        !(a.second_moment == b.second_moment)) {
      return false;
    }
  }
  return true;
}

Tensor UniformTensor(int rows, int cols, double bound, Rng& rng) {
  Tensor t(rows, cols);
  for (double& x : t.data()) x = rng.Uniform(-bound, bound);
  return t;
}

void AdamStep(ParamStore& store, const std::vector<Tensor>& grads, double lr,
              const AdamOptions& options) {
  if (grads.size() != static_cast<size_t>(store.size())) {
    throw std::invalid_argument("AdamStep: gradient count mismatch");
  }
  for (int i = 0; i < store.size(); ++i) {
    if (!grads[static_cast<size_t>(i)].SameShape(store.at(i).value)) {
      throw std::invalid_argument("AdamStep: gradient shape mismatch for " +
                                  store.at(i).name);
    }
  }
  const int64_t t = store.step() + 1;
  const double correction1 = 1.0 - std::pow(options.beta1, static_cast<double>(t));
  const double correction2 = 1.0 - std::pow(options.beta2, static_cast<double>(t));
  for (int i = 0; i < store.size(); ++i) {
    Parameter& p = store.at(i);
    auto g = grads[static_cast<size_t>(i)].data();
    auto w = p.value.data();
    auto m = p.first_moment.data();
    auto v = p.second_moment.data();
    for (size_t k = 0; k < w.size(); ++k) {
      m[k] = options.beta1 * m[k] + (1.0 - options.beta1) * g[k];
      v[k] = options.beta2 * v[k] + (1.0 - options.beta2) * g[k] * g[k];
      const double m_hat = m[k] / correction1;
      const double v_hat = v[k] / correction2;
      w[k] -= lr * m_hat / (std::sqrt(v_hat) + options.epsilon);
    }
  }
  store.set_step(t);
}

}  // namespace anaphor
