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

#ifndef ANAPHOR_TESTS_GRADCHECK_H_
#define ANAPHOR_TESTS_GRADCHECK_H_

// Central finite-difference oracle for tape gradients. Evaluates the scalar
// function with perturbed copies of the inputs on fresh tapes, so it shares
// no state with the reverse pass under test.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "anaphor/autodiff.h"
#include "anaphor/rng.h"
#include "anaphor/tensor.h"

namespace anaphor::testing {

using ScalarFn = std::function<Var(Tape&, const std::vector<Var>&)>;

inline double Evaluate(const ScalarFn& f, const std::vector<Tensor>& inputs) {
  Tape tape(/*record_gradients=*/false);
  std::vector<Var> vars;
  for (const Tensor& t : inputs) vars.push_back(tape.Constant(t));
  return f(tape, vars).value()[0];
}

// Max over all input entries of |analytic - numeric| / max(|analytic|,
// |numeric|, 1e-6).
inline double MaxRelativeGradError(const ScalarFn& f, std::vector<Tensor> inputs,
                                   double eps = 1e-5) {
  Tape tape;
  std::vector<Var> vars;
  for (const Tensor& t : inputs) vars.push_back(tape.Leaf(t));
  tape.Backward(f(tape, vars));
  double worst = 0.0;
  for (size_t k = 0; k < inputs.size(); ++k) {
    const Tensor analytic = tape.grad(vars[k]);
    for (size_t i = 0; i < inputs[k].size(); ++i) {
      const double saved = inputs[k][i];
      inputs[k][i] = saved + eps;
      const double up = Evaluate(f, inputs);
      inputs[k][i] = saved - eps;
      const double down = Evaluate(f, inputs);
      inputs[k][i] = saved;
      const double numeric = (up - down) / (2.0 * eps);
      const double denom =
          std::max({std::abs(analytic[i]), std::abs(numeric), 1e-6});
      worst = std::max(worst, std::abs(analytic[i] - numeric) / denom);
    }
  }
  return worst;
}

inline Tensor RandomTensor(int rows, int cols, Rng& rng, double scale = 1.0) {
  Tensor t(rows, cols);
  for (double& x : t.data()) x = rng.Uniform(-scale, scale);
  return t;
}

// Reduces any output to a scalar with fixed random weights, so every output
// entry contributes to the checked gradient.
inline Var Scalarize(Var y, uint64_t seed) {
  Rng rng(seed);
  return WeightedSum(y, RandomTensor(y.rows(), y.cols(), rng));
}

}  // namespace anaphor::testing

#endif  // ANAPHOR_TESTS_GRADCHECK_H_
