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

#ifndef ANAPHOR_AUTODIFF_H_
#define ANAPHOR_AUTODIFF_H_

// Tape-based reverse-mode differentiation over batched rank-2 tensors.
//
// Every op appends a node holding its value and a closure that pushes the
// node's gradient into its parents. Rows are batch items throughout.

#include <deque>
#include <functional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "anaphor/params.h"
#include "anaphor/tensor.h"

namespace anaphor {

class Tape;

// Handle to a tape node.
struct Var {
  Tape* tape = nullptr;
  int id = -1;

  const Tensor& value() const;
  int rows() const { return value().rows(); }
  int cols() const { return value().cols(); }
};

class Tape {
 public:
  // A tape built with record_gradients=false keeps values only, for
  // inference; Backward on it is an error.
  explicit Tape(bool record_gradients = true) : record_(record_gradients) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var Constant(Tensor value);
  // Differentiable free input; its gradient is read back with grad().
  Var Leaf(Tensor value);
  // Binds a store parameter. A parameter may be bound once per tape; its
  // gradient is returned by ParamGrads().
  Var Param(const ParamStore& store, int index);
  Var Param(const ParamStore& store, std::string_view name);

  const Tensor& value(Var v) const { return nodes_[Index(v)].value; }
  // Gradient of the last Backward's loss w.r.t. v (zeros if unreached).
  Tensor grad(Var v) const;

  // Loss must be 1x1. Throws std::logic_error if the tape does not record.
  void Backward(Var loss);
  // Gradients for every parameter of `store`, zero where not bound.
  std::vector<Tensor> ParamGrads(const ParamStore& store) const;

  bool recording() const { return record_; }
  size_t num_nodes() const { return nodes_.size(); }

  // Op-implementation interface.
  using BackwardFn =
      std::function<void(Tape&, const Tensor& grad_out, const Tensor& out)>;
  Var Push(std::string_view op, Tensor value, std::span<const Var> parents,
           BackwardFn backward);
  bool RequiresGrad(Var v) const { return nodes_[Index(v)].requires_grad; }
  // Accumulation target for v's gradient, allocated on first use.
  Tensor& GradRef(Var v);

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    bool requires_grad = false;
    BackwardFn backward;
  };

  size_t Index(Var v) const;

  bool record_;
  std::deque<Node> nodes_;
  const ParamStore* store_ = nullptr;
  std::vector<std::pair<int, int>> param_nodes_;  // (param index, node id)
};

// ---- ops --------------------------------------------------------------------

// x * w^T + b, with x (n x in), w (out x in), b (1 x out).
Var Linear(Var x, Var w, Var b);
// x * w^T.
Var MatMulT(Var x, Var w);
Var Add(Var a, Var b);
Var Sub(Var a, Var b);
Var Mul(Var a, Var b);
Var OneMinus(Var a);
Var Scale(Var a, double factor);
Var Sigmoid(Var a);
Var Tanh(Var a);
// Row i of the result is row ids[i] of table.
Var GatherRows(Var table, std::span<const int> ids);
// Repeats a 1 x d row n times.
Var BroadcastRows(Var row, int n);
// Row-wise mask[i] * a + (1 - mask[i]) * b. The mask is not differentiated.
Var Blend(std::span<const double> mask, Var a, Var b);
// Row-wise softmax.
Var Softmax(Var logits);
// log softmax(logits)[i, ids[i]] as an n x 1 column.
Var LogSoftmaxPick(Var logits, std::span<const int> ids);
// Row-wise entropy (nats) of softmax(logits), n x 1.
Var RowEntropy(Var logits);

// Column blocks of a logit matrix, each read as an independent categorical.
struct Block {
  int offset = 0;
  int size = 0;
};
// Per-row sum over blocks of -ln max(p_target, 1e-12); targets is n x
// blocks.size(), row-major. Result is n x 1.
Var BlockCrossEntropy(Var logits, std::span<const Block> blocks,
                      std::span<const int> targets);

Var Sum(Var a);
Var Mean(Var a);
// sum_ij weights[ij] * a[ij], weights held constant. Result is 1 x 1.
Var WeightedSum(Var a, const Tensor& weights);

inline constexpr double kProbabilityFloor = 1e-12;

}  // namespace anaphor

#endif  // ANAPHOR_AUTODIFF_H_
