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

#ifndef ANAPHOR_NN_H_
#define ANAPHOR_NN_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "anaphor/autodiff.h"
#include "anaphor/params.h"
#include "anaphor/rng.h"
#include "anaphor/tensor.h"

namespace anaphor {

// x * w^T + b for x of shape (n x in).
Tensor LinearForward(const Tensor& x, const Tensor& w, const Tensor& b);

// Max-subtracted softmax. Throws NumericError on non-finite logits.
std::vector<double> Softmax(std::span<const double> logits);

// -ln probs[target] in nats, with probs clamped below at 1e-12.
double CrossEntropy(std::span<const double> probs, int target);

// Inverse-CDF draw from a probability vector.
int CategoricalSample(std::span<const double> probs, Rng& rng);

// First index of the maximum.
int Argmax(std::span<const double> values);

// Gated recurrent unit (Cho et al. convention):
//   z  = sigmoid(W_z x + U_z h + b_z)
//   r  = sigmoid(W_r x + U_r h + b_r)
//   h~ = tanh(W_h x + U_h (r * h) + b_h)
//   h' = (1 - z) * h~ + z * h
// W_* are hidden x input, U_* hidden x hidden, b_* 1 x hidden.
struct GruCellWeights {
  Tensor w_z, w_r, w_h;
  Tensor u_z, u_r, u_h;
  Tensor b_z, b_r, b_h;

  int input_size() const { return w_z.cols(); }
  int hidden_size() const { return w_z.rows(); }

  static GruCellWeights Zeros(int input, int hidden);
  // uniform(-1/sqrt(hidden), 1/sqrt(hidden)).
  static GruCellWeights Random(int input, int hidden, Rng& rng);
};

// One step for a batch: x (n x input), h (n x hidden).
Tensor GruCellStep(const Tensor& x, const Tensor& h, const GruCellWeights& p);

struct GruVars {
  Var w_z, w_r, w_h;
  Var u_z, u_r, u_h;
  Var b_z, b_r, b_h;
};

// Registers "<prefix>.W_z" ... "<prefix>.b_h" with seeded uniform init.
void AddGruParams(ParamStore& store, std::string_view prefix, int input,
                  int hidden, Rng& rng);
GruVars BindGru(Tape& tape, const ParamStore& store, std::string_view prefix);
GruVars ConstantGru(Tape& tape, const GruCellWeights& p);
Var GruStep(Var x, Var h, const GruVars& p);

}  // namespace anaphor

#endif  // ANAPHOR_NN_H_
