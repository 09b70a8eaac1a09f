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

#include "anaphor/autodiff.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace anaphor {
namespace {

void CheckSameShape(std::string_view op, Var a, Var b) {
  if (!a.value().SameShape(b.value())) {
    throw std::invalid_argument(std::string(op) + ": dimension mismatch " +
                                a.value().ShapeString() + " vs " +
                                b.value().ShapeString());
  }
}

void CheckSameTape(Var a, Var b) {
  if (a.tape != b.tape || a.tape == nullptr) {
    throw std::invalid_argument("op arguments live on different tapes");
  }
}

// Stable softmax of one row into `out`; returns log-sum-exp.
double SoftmaxRow(std::span<const double> z, std::span<double> out) {
  const double mx = *std::max_element(z.begin(), z.end());
  double total = 0.0;
  for (size_t j = 0; j < z.size(); ++j) {
    out[j] = std::exp(z[j] - mx);
    total += out[j];
  }
  for (double& p : out) p /= total;
  return mx + std::log(total);
}

Tensor RowSoftmax(const Tensor& logits) {
  Tensor probs(logits.rows(), logits.cols());
  for (int i = 0; i < logits.rows(); ++i) SoftmaxRow(logits.row(i), probs.row(i));
  return probs;
}

}  // namespace

const Tensor& Var::value() const { return tape->value(*this); }

size_t Tape::Index(Var v) const {
  if (v.tape != this || v.id < 0 || static_cast<size_t>(v.id) >= nodes_.size()) {
    throw std::invalid_argument("Var does not belong to this tape");
  }
  return static_cast<size_t>(v.id);
}

Var Tape::Push(std::string_view op, Tensor value, std::span<const Var> parents,
               BackwardFn backward) {
  if (!value.AllFinite()) {
    throw NumericError(std::string(op) + ": non-finite output");
  }
  bool requires_grad = false;
  if (record_) {
    for (Var p : parents) requires_grad = requires_grad || RequiresGrad(p);
  }
  Node node;
  node.value = std::move(value);
  node.requires_grad = requires_grad;
  if (requires_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var{this, static_cast<int>(nodes_.size()) - 1};
}

Var Tape::Constant(Tensor value) {
  if (!value.AllFinite()) throw NumericError("Constant: non-finite input");
  nodes_.push_back(Node{std::move(value), Tensor(), false, nullptr});
  return Var{this, static_cast<int>(nodes_.size()) - 1};
}

Var Tape::Leaf(Tensor value) {
  if (!value.AllFinite()) throw NumericError("Leaf: non-finite input");
  nodes_.push_back(Node{std::move(value), Tensor(), record_, nullptr});
  return Var{this, static_cast<int>(nodes_.size()) - 1};
}

Var Tape::Param(const ParamStore& store, int index) {
  if (store_ != nullptr && store_ != &store) {
    throw std::invalid_argument("Tape: parameters from two stores");
  }
  store_ = &store;
  for (auto [param, node] : param_nodes_) {
    if (param == index) return Var{this, node};
  }
  Var v = Leaf(store.at(index).value);
  param_nodes_.emplace_back(index, v.id);
  return v;
}

Var Tape::Param(const ParamStore& store, std::string_view name) {
  return Param(store, store.IndexOf(name));
}

Tensor& Tape::GradRef(Var v) {
  Node& node = nodes_[Index(v)];
  if (node.grad.empty() && !node.value.empty()) {
    node.grad = Tensor(node.value.rows(), node.value.cols());
  }
  return node.grad;
}

Tensor Tape::grad(Var v) const {
  const Node& node = nodes_[Index(v)];
  if (node.grad.empty()) return Tensor(node.value.rows(), node.value.cols());
  return node.grad;
}

void Tape::Backward(Var loss) {
  if (!record_) throw std::logic_error("Backward: graph not recorded");
  const size_t root = Index(loss);
  if (nodes_[root].value.size() != 1) {
    throw std::invalid_argument("Backward: loss must be 1x1");
  }
  for (Node& node : nodes_) node.grad = Tensor();
  if (!nodes_[root].requires_grad) return;
  nodes_[root].grad = Tensor(1, 1, 1.0);
  for (size_t i = root + 1; i-- > 0;) {
    Node& node = nodes_[i];
    if (node.backward && !node.grad.empty()) node.backward(*this, node.grad, node.value);
  }
}

std::vector<Tensor> Tape::ParamGrads(const ParamStore& store) const {
  std::vector<Tensor> grads = store.ZeroGrads();
  if (store_ != &store) return grads;
  for (auto [param, node] : param_nodes_) {
    const Tensor& g = nodes_[static_cast<size_t>(node)].grad;
    if (!g.empty()) grads[static_cast<size_t>(param)] = g;
  }
  return grads;
}

// ---- ops --------------------------------------------------------------------

Var MatMulT(Var x, Var w) {
  CheckSameTape(x, w);
  if (x.cols() != w.cols()) {
    throw std::invalid_argument("MatMulT: dimension mismatch " +
                                x.value().ShapeString() + " * " +
                                w.value().ShapeString() + "^T");
  }
  Tensor y(x.rows(), w.rows());
  y.map().noalias() = x.value().map() * w.value().map().transpose();
  Var parents[] = {x, w};
  return x.tape->Push("MatMulT", std::move(y), parents,
                      [x, w](Tape& t, const Tensor& g, const Tensor&) {
                        if (t.RequiresGrad(x)) {
                          t.GradRef(x).map().noalias() += g.map() * w.value().map();
                        }
                        if (t.RequiresGrad(w)) {
                          t.GradRef(w).map().noalias() +=
                              g.map().transpose() * x.value().map();
                        }
                      });
}

Var Linear(Var x, Var w, Var b) {
  CheckSameTape(x, w);
  CheckSameTape(x, b);
  if (x.cols() != w.cols() || b.rows() != 1 || b.cols() != w.rows()) {
    throw std::invalid_argument("Linear: dimension mismatch x" +
                                x.value().ShapeString() + " W" +
                                w.value().ShapeString() + " b" +
                                b.value().ShapeString());
  }
  Tensor y(x.rows(), w.rows());
  y.map().noalias() = x.value().map() * w.value().map().transpose();
  y.map().rowwise() += b.value().map().row(0);
  Var parents[] = {x, w, b};
  return x.tape->Push("Linear", std::move(y), parents,
                      [x, w, b](Tape& t, const Tensor& g, const Tensor&) {
                        if (t.RequiresGrad(x)) {
                          t.GradRef(x).map().noalias() += g.map() * w.value().map();
                        }
                        if (t.RequiresGrad(w)) {
                          t.GradRef(w).map().noalias() +=
                              g.map().transpose() * x.value().map();
                        }
                        if (t.RequiresGrad(b)) {
                          t.GradRef(b).map().row(0) += g.map().colwise().sum();
                        }
                      });
}

Var Add(Var a, Var b) {
  CheckSameTape(a, b);
  CheckSameShape("Add", a, b);
  Tensor y(a.rows(), a.cols());
  y.map() = a.value().map() + b.value().map();
  Var parents[] = {a, b};
  return a.tape->Push("Add", std::move(y), parents, [a, b](Tape& t, const Tensor& g, const Tensor&) {
    if (t.RequiresGrad(a)) t.GradRef(a).map() += g.map();
    if (t.RequiresGrad(b)) t.GradRef(b).map() += g.map();
  });
}

Var Sub(Var a, Var b) {
  CheckSameTape(a, b);
  CheckSameShape("Sub", a, b);
  Tensor y(a.rows(), a.cols());
  y.map() = a.value().map() - b.value().map();
  Var parents[] = {a, b};
  return a.tape->Push("Sub", std::move(y), parents, [a, b](Tape& t, const Tensor& g, const Tensor&) {
    if (t.RequiresGrad(a)) t.GradRef(a).map() += g.map();
    if (t.RequiresGrad(b)) t.GradRef(b).map() -= g.map();
  });
}

Var Mul(Var a, Var b) {
  CheckSameTape(a, b);
  CheckSameShape("Mul", a, b);
  Tensor y(a.rows(), a.cols());
  y.map() = a.value().map().cwiseProduct(b.value().map());
  Var parents[] = {a, b};
  return a.tape->Push("Mul", std::move(y), parents, [a, b](Tape& t, const Tensor& g, const Tensor&) {
    if (t.RequiresGrad(a)) {
      t.GradRef(a).map() += g.map().cwiseProduct(b.value().map());
    }
    if (t.RequiresGrad(b)) {
      t.GradRef(b).map() += g.map().cwiseProduct(a.value().map());
    }
  });
}

Var OneMinus(Var a) {
  Tensor y(a.rows(), a.cols());
  y.map() = (1.0 - a.value().map().array()).matrix();
  Var parents[] = {a};
  return a.tape->Push("OneMinus", std::move(y), parents,
                      [a](Tape& t, const Tensor& g, const Tensor&) { t.GradRef(a).map() -= g.map(); });
}

Var Scale(Var a, double factor) {
  Tensor y(a.rows(), a.cols());
  y.map() = a.value().map() * factor;
  Var parents[] = {a};
  return a.tape->Push("Scale", std::move(y), parents,
                      [a, factor](Tape& t, const Tensor& g, const Tensor&) {
                        t.GradRef(a).map() += g.map() * factor;
                      });
}

Var Sigmoid(Var a) {
  Tensor y(a.rows(), a.cols());
  y.map() = (1.0 / (1.0 + (-a.value().map().array()).exp())).matrix();
  Var parents[] = {a};
  return a.tape->Push("Sigmoid", std::move(y), parents,
                      [a](Tape& t, const Tensor& g, const Tensor& y) {
                        t.GradRef(a).map().array() +=
                            g.map().array() * y.map().array() * (1.0 - y.map().array());
                      });
}

Var Tanh(Var a) {
  Tensor y(a.rows(), a.cols());
  y.map() = a.value().map().array().tanh().matrix();
  Var parents[] = {a};
  return a.tape->Push("Tanh", std::move(y), parents,
                      [a](Tape& t, const Tensor& g, const Tensor& y) {
                        t.GradRef(a).map().array() +=
                            g.map().array() * (1.0 - y.map().array().square());
                      });
}

Var GatherRows(Var table, std::span<const int> ids) {
  const Tensor& tv = table.value();
  Tensor y(static_cast<int>(ids.size()), tv.cols());
  for (size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0 || ids[i] >= tv.rows()) {
      throw std::invalid_argument("GatherRows: index " + std::to_string(ids[i]) +
                                  " out of range");
    }
    std::copy_n(tv.row(ids[i]).begin(), tv.cols(), y.row(static_cast<int>(i)).begin());
  }
  std::vector<int> index(ids.begin(), ids.end());
  Var parents[] = {table};
  return table.tape->Push(
      "GatherRows", std::move(y), parents,
      [table, index = std::move(index)](Tape& t, const Tensor& g, const Tensor&) {
        Tensor& gt = t.GradRef(table);
        for (size_t i = 0; i < index.size(); ++i) {
          auto src = g.row(static_cast<int>(i));
          auto dst = gt.row(index[i]);
          for (size_t k = 0; k < src.size(); ++k) dst[k] += src[k];
        }
      });
}

Var BroadcastRows(Var row, int n) {
  if (row.rows() != 1) throw std::invalid_argument("BroadcastRows: expects 1 x d");
  Tensor y(n, row.cols());
  y.map().rowwise() = row.value().map().row(0);
  Var parents[] = {row};
  return row.tape->Push("BroadcastRows", std::move(y), parents,
                        [row](Tape& t, const Tensor& g, const Tensor&) {
                          t.GradRef(row).map().row(0) += g.map().colwise().sum();
                        });
}

Var Blend(std::span<const double> mask, Var a, Var b) {
  CheckSameTape(a, b);
  CheckSameShape("Blend", a, b);
  if (mask.size() != static_cast<size_t>(a.rows())) {
    throw std::invalid_argument("Blend: mask length mismatch");
  }
  Eigen::VectorXd m = Eigen::Map<const Eigen::VectorXd>(mask.data(), a.rows());
  Tensor y(a.rows(), a.cols());
  y.map() = m.asDiagonal() * a.value().map() +
            (1.0 - m.array()).matrix().asDiagonal() * b.value().map();
  Var parents[] = {a, b};
  return a.tape->Push("Blend", std::move(y), parents,
                      [a, b, m](Tape& t, const Tensor& g, const Tensor&) {
                        if (t.RequiresGrad(a)) {
                          t.GradRef(a).map() += m.asDiagonal() * g.map();
                        }
                        if (t.RequiresGrad(b)) {
                          t.GradRef(b).map() +=
                              (1.0 - m.array()).matrix().asDiagonal() * g.map();
                        }
                      });
}

Var Softmax(Var logits) {
  Tensor y = RowSoftmax(logits.value());
  Var parents[] = {logits};
  return logits.tape->Push(
      "Softmax", std::move(y), parents,
      [logits](Tape& t, const Tensor& g, const Tensor& y) {
        Tensor& gz = t.GradRef(logits);
        for (int i = 0; i < y.rows(); ++i) {
          auto p = y.row(i);
          auto gi = g.row(i);
          double dot = 0.0;
          for (size_t j = 0; j < p.size(); ++j) dot += gi[j] * p[j];
          auto out = gz.row(i);
          for (size_t j = 0; j < p.size(); ++j) out[j] += p[j] * (gi[j] - dot);
        }
      });
}

Var LogSoftmaxPick(Var logits, std::span<const int> ids) {
  const Tensor& z = logits.value();
  if (ids.size() != static_cast<size_t>(z.rows())) {
    throw std::invalid_argument("LogSoftmaxPick: index count mismatch");
  }
  Tensor probs(z.rows(), z.cols());
  Tensor y(z.rows(), 1);
  for (int i = 0; i < z.rows(); ++i) {
    const int k = ids[static_cast<size_t>(i)];
    if (k < 0 || k >= z.cols()) {
      throw std::invalid_argument("LogSoftmaxPick: index out of range");
    }
    const double lse = SoftmaxRow(z.row(i), probs.row(i));
    y(i, 0) = z(i, k) - lse;
  }
  std::vector<int> index(ids.begin(), ids.end());
  Var parents[] = {logits};
  return logits.tape->Push(
      "LogSoftmaxPick", std::move(y), parents,
      [logits, index = std::move(index), probs = std::move(probs)](
          Tape& t, const Tensor& g, const Tensor&) {
        Tensor& gz = t.GradRef(logits);
        for (int i = 0; i < probs.rows(); ++i) {
          const double gi = g(i, 0);
          if (gi == 0.0) continue;
          auto p = probs.row(i);
          auto out = gz.row(i);
          for (size_t j = 0; j < p.size(); ++j) out[j] -= gi * p[j];
          out[static_cast<size_t>(index[static_cast<size_t>(i)])] += gi;
        }
      });
}

Var RowEntropy(Var logits) {
  const Tensor& z = logits.value();
  Tensor probs(z.rows(), z.cols());
  Tensor logp(z.rows(), z.cols());
  Tensor y(z.rows(), 1);
  for (int i = 0; i < z.rows(); ++i) {
    const double lse = SoftmaxRow(z.row(i), probs.row(i));
    double h = 0.0;
    for (int j = 0; j < z.cols(); ++j) {
      logp(i, j) = z(i, j) - lse;
      h -= probs(i, j) * logp(i, j);
    }
    y(i, 0) = h;
  }
  Var parents[] = {logits};
  return logits.tape->Push(
      "RowEntropy", std::move(y), parents,
      [logits, probs = std::move(probs), logp = std::move(logp)](
          Tape& t, const Tensor& g, const Tensor& h) {
        Tensor& gz = t.GradRef(logits);
        for (int i = 0; i < probs.rows(); ++i) {
          const double gi = g(i, 0);
          if (gi == 0.0) continue;
          for (int j = 0; j < probs.cols(); ++j) {
            gz(i, j) -= gi * probs(i, j) * (logp(i, j) + h(i, 0));
          }
        }
      });
}

Var BlockCrossEntropy(Var logits, std::span<const Block> blocks,
                      std::span<const int> targets) {
  const Tensor& z = logits.value();
  const size_t nb = blocks.size();
  if (targets.size() != nb * static_cast<size_t>(z.rows())) {
    throw std::invalid_argument("BlockCrossEntropy: target count mismatch");
  }
  for (const Block& blk : blocks) {
    if (blk.size < 1 || blk.offset < 0 || blk.offset + blk.size > z.cols()) {
      throw std::invalid_argument("BlockCrossEntropy: block outside logits");
    }
  }
  // Gradient w.r.t. logits is softmax - onehot per block, zero for a block
  // whose target probability sits below the floor.
  Tensor dz(z.rows(), z.cols());
  Tensor y(z.rows(), 1);
  for (int i = 0; i < z.rows(); ++i) {
    double loss = 0.0;
    for (size_t b = 0; b < nb; ++b) {
      const Block& blk = blocks[b];
      const int target = targets[static_cast<size_t>(i) * nb + b];
      if (target < 0 || target >= blk.size) {
        throw std::invalid_argument("BlockCrossEntropy: target out of range");
      }
      auto zrow = z.row(i).subspan(static_cast<size_t>(blk.offset),
                                   static_cast<size_t>(blk.size));
      auto prow = dz.row(i).subspan(static_cast<size_t>(blk.offset),
                                    static_cast<size_t>(blk.size));
      SoftmaxRow(zrow, prow);
      const double pt = prow[static_cast<size_t>(target)];
      if (pt < kProbabilityFloor) {
        loss -= std::log(kProbabilityFloor);
        std::fill(prow.begin(), prow.end(), 0.0);
      } else {
        loss -= std::log(pt);
        prow[static_cast<size_t>(target)] -= 1.0;
      }
    }
    y(i, 0) = loss;
  }
  Var parents[] = {logits};
  return logits.tape->Push("BlockCrossEntropy", std::move(y), parents,
                           [logits, dz = std::move(dz)](Tape& t, const Tensor& g,
                                                        const Tensor&) {
                             Eigen::VectorXd col = g.map().col(0);
                             t.GradRef(logits).map() += col.asDiagonal() * dz.map();
                           });
}

Var Sum(Var a) {
  Tensor y(1, 1, a.value().map().sum());
  Var parents[] = {a};
  return a.tape->Push("Sum", std::move(y), parents,
                      [a](Tape& t, const Tensor& g, const Tensor&) {
                        t.GradRef(a).map().array() += g[0];
                      });
}

Var Mean(Var a) {
  const double n = static_cast<double>(a.value().size());
  if (n == 0) throw std::invalid_argument("Mean: empty tensor");
  Tensor y(1, 1, a.value().map().sum() / n);
  Var parents[] = {a};
  return a.tape->Push("Mean", std::move(y), parents,
                      [a, n](Tape& t, const Tensor& g, const Tensor&) {
                        t.GradRef(a).map().array() += g[0] / n;
                      });
}

Var WeightedSum(Var a, const Tensor& weights) {
  if (!a.value().SameShape(weights)) {
    throw std::invalid_argument("WeightedSum: dimension mismatch");
  }
  Tensor y(1, 1, a.value().map().cwiseProduct(weights.map()).sum());
  Var parents[] = {a};
  return a.tape->Push("WeightedSum", std::move(y), parents,
                      [a, weights](Tape& t, const Tensor& g, const Tensor&) {
                        t.GradRef(a).map() += weights.map() * g[0];
                      });
}

}  // namespace anaphor
