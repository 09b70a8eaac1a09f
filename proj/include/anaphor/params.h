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

#ifndef ANAPHOR_PARAMS_H_
#define ANAPHOR_PARAMS_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "anaphor/rng.h"
#include "anaphor/tensor.h"

namespace anaphor {

struct Parameter {
  std::string name;
  Tensor value;
  // Adam moments, shape-matched to `value`.
  Tensor first_moment;
  Tensor second_moment;
};

// Named trainable tensors of one agent together with their optimizer state.
class ParamStore {
 public:
  // Returns the index of the new parameter. Names must be unique.
  int Add(std::string name, Tensor init);

  int IndexOf(std::string_view name) const;
  bool Contains(std::string_view name) const;

  int size() const { return static_cast<int>(params_.size()); }
  Parameter& at(int index) { return params_.at(static_cast<size_t>(index)); }
  const Parameter& at(int index) const { return params_.at(static_cast<size_t>(index)); }
  Tensor& value(std::string_view name) { return at(IndexOf(name)).value; }
  const Tensor& value(std::string_view name) const { return at(IndexOf(name)).value; }

  const std::vector<Parameter>& params() const { return params_; }

  int64_t step() const { return step_; }
  void set_step(int64_t step) { step_ = step; }

  // Zero tensors shaped like every parameter, in store order.
  std::vector<Tensor> ZeroGrads() const;
  size_t NumScalars() const;

  bool operator==(const ParamStore& other) const;

 private:
  std::vector<Parameter> params_;
  int64_t step_ = 0;
};

// Entries drawn i.i.d. from uniform(-bound, bound).
Tensor UniformTensor(int rows, int cols, double bound, Rng& rng);

struct AdamOptions {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// One bias-corrected Adam update. `grads` is aligned with store order; the
// store's step count advances by one per call.
void AdamStep(ParamStore& store, const std::vector<Tensor>& grads, double lr,
              const AdamOptions& options = {});

}  // namespace anaphor

#endif  // ANAPHOR_PARAMS_H_
