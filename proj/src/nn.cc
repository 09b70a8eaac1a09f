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

#include "anaphor/nn.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace anaphor {

Tensor LinearForward(const Tensor& x, const Tensor& w, const Tensor& b) {
  Tape tape(/*record_gradients=*/false);
  return Linear(tape.Constant(x), tape.Constant(w), tape.Constant(b)).value();
}

std::vector<double> Softmax(std::span<const double> logits) {
  if (logits.empty()) throw std::invalid_argument("Softmax: empty input");
  for (double z : logits) {
    if (!std::isfinite(z)) throw NumericError("Softmax: non-finite logit");
  }
  const double mx = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double total = 0.0;
  for (size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - mx);
    total += out[i];
  }
  for (double& p : out) p /= total;
  return out;
}

double CrossEntropy(std::span<const double> probs, int target) {
  if (target < 0 || static_cast<size_t>(target) >= probs.size()) {
    throw std::invalid_argument("CrossEntropy: target out of range");
  }
  return -std::log(std::max(probs[static_cast<size_t>(target)], kProbabilityFloor));
}

int CategoricalSample(std::span<const double> probs, Rng& rng) {
  const double u = rng.Uniform();
  double cumulative = 0.0;
  int last_positive = 0;
  for (size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    cumulative += probs[i];
    last_positive = static_cast<int>(i);
    if (u < cumulative) return static_cast<int>(i);
  }
  // Rounding left the total just under u.
  return last_positive;
}

int Argmax(std::span<const double> values) {
  return static_cast<int>(std::max_element(values.begin(), values.end()) -
                          values.begin());
}

GruCellWeights GruCellWeights::Zeros(int input, int hidden) {
  GruCellWeights p;
  for (Tensor* w : {&p.w_z, &p.w_r, &p.w_h}) *w = Tensor(hidden, input);
  for (Tensor* u : {&p.u_z, &p.u_r, &p.u_h}) *u = Tensor(hidden, hidden);
  for (Tensor* b : {&p.b_z, &p.b_r, &p.b_h}) *b = Tensor(1, hidden);
  return p;
}

GruCellWeights GruCellWeights::Random(int input, int hidden, Rng& rng) {
  const double k = 1.0 / std::sqrt(static_cast<double>(hidden));
  GruCellWeights p;
  for (Tensor* w : {&p.w_z, &p.w_r, &p.w_h}) *w = UniformTensor(hidden, input, k, rng);
  for (Tensor* u : {&p.u_z, &p.u_r, &p.u_h}) *u = UniformTensor(hidden, hidden, k, rng);
  for (Tensor* b : {&p.b_z, &p.b_r, &p.b_h}) *b = UniformTensor(1, hidden, k, rng);
  return p;
}

Tensor GruCellStep(const Tensor& x, const Tensor& h, const GruCellWeights& p) {
  Tape tape(/*record_gradients=*/false);
  GruVars vars = ConstantGru(tape, p);
  return GruStep(tape.Constant(x), tape.Constant(h), vars).value();
}

namespace {
constexpr const char* kGruNames[9] = {"W_z", "W_r", "W_h", "U_z", "U_r",
                                      "U_h", "b_z", "b_r", "b_h"};

std::string GruName(std::string_view prefix, int i) {
  return std::string(prefix) + "." + kGruNames[i];
}
}  // namespace

void AddGruParams(ParamStore& store, std::string_view prefix, int input,
                  int hidden, Rng& rng) {
  GruCellWeights p = GruCellWeights::Random(input, hidden, rng);
  Tensor* parts[9] = {&p.w_z, &p.w_r, &p.w_h, &p.u_z, &p.u_r,
                      &p.u_h, &p.b_z, &p.b_r, &p.b_h};
  for (int i = 0; i < 9; ++i) store.Add(GruName(prefix, i), std::move(*parts[i]));
}

GruVars BindGru(Tape& tape, const ParamStore& store, std::string_view prefix) {
  GruVars v;
  Var* parts[9] = {&v.w_z, &v.w_r, &v.w_h, &v.u_z, &v.u_r,
                   &v.u_h, &v.b_z, &v.b_r, &v.b_h};
  for (int i = 0; i < 9; ++i) *parts[i] = tape.Param(store, GruName(prefix, i));
  return v;
}

GruVars ConstantGru(Tape& tape, const GruCellWeights& p) {
  return GruVars{tape.Constant(p.w_z), tape.Constant(p.w_r), tape.Constant(p.w_h),
                 tape.Constant(p.u_z), tape.Constant(p.u_r), tape.Constant(p.u_h),
                 tape.Constant(p.b_z), tape.Constant(p.b_r), tape.Constant(p.b_h)};
}

Var GruStep(Var x, Var h, const GruVars& p) {
  if (x.rows() != h.rows() || h.cols() != p.u_z.rows() ||
      x.cols() != p.w_z.cols()) {
    throw std::invalid_argument("GruStep: dimension mismatch");
  }
  const auto xm = x.value().map();
  const auto hm = h.value().map();
  const int n = x.rows();
  const int d = h.cols();
  auto gate = [&](Var w, Var u, Var b, const ConstMatrixMap& hh) {
    Tensor a(n, d);
    a.map().noalias() = xm * w.value().map().transpose();
    a.map().noalias() += hh * u.value().map().transpose();
    a.map().rowwise() += b.value().map().row(0);
    return a;
  };
  Tensor z = gate(p.w_z, p.u_z, p.b_z, hm);
  z.map() = (1.0 / (1.0 + (-z.map().array()).exp())).matrix();
  Tensor r = gate(p.w_r, p.u_r, p.b_r, hm);
  r.map() = (1.0 / (1.0 + (-r.map().array()).exp())).matrix();
  Tensor rh(n, d);
  rh.map() = r.map().cwiseProduct(hm);
  const Tensor& rh_c = rh;
  Tensor c = gate(p.w_h, p.u_h, p.b_h, rh_c.map());
  c.map() = c.map().array().tanh().matrix();
  Tensor out(n, d);
  out.map() = ((1.0 - z.map().array()) * c.map().array() +
               z.map().array() * hm.array())
                  .matrix();
  Var parents[] = {x, h, p.w_z, p.w_r, p.w_h, p.u_z, p.u_r, p.u_h,
                   p.b_z, p.b_r, p.b_h};
  return x.tape->Push(
      "GruStep", std::move(out), parents,
      [x, h, p, z = std::move(z), r = std::move(r), rh = std::move(rh),
       c = std::move(c)](Tape& t, const Tensor& g, const Tensor&) {
        const auto ga = g.map().array();
        const auto za = z.map().array();
        const auto ra = r.map().array();
        const auto ca = c.map().array();
        const auto hm = h.value().map();
        const RowMajorMatrix daz =
            (ga * (hm.array() - ca) * za * (1.0 - za)).matrix();
        const RowMajorMatrix dac = (ga * (1.0 - za) * (1.0 - ca.square())).matrix();
        const RowMajorMatrix drh = dac * p.u_h.value().map();
        const RowMajorMatrix dar =
            (drh.array() * hm.array() * ra * (1.0 - ra)).matrix();
        if (t.RequiresGrad(x)) {
          auto gx = t.GradRef(x).map();
          gx.noalias() += daz * p.w_z.value().map();
          gx.noalias() += dar * p.w_r.value().map();
          gx.noalias() += dac * p.w_h.value().map();
        }
        if (t.RequiresGrad(h)) {
          auto gh = t.GradRef(h).map();
          gh.array() += ga * za + drh.array() * ra;
          gh.noalias() += daz * p.u_z.value().map();
          gh.noalias() += dar * p.u_r.value().map();
        }
        const auto xm = x.value().map();
        auto weight = [&t](Var w, const RowMajorMatrix& da, const auto& in) {
          if (t.RequiresGrad(w)) t.GradRef(w).map().noalias() += da.transpose() * in;
        };
        auto bias = [&t](Var b, const RowMajorMatrix& da) {
          if (t.RequiresGrad(b)) t.GradRef(b).map().row(0) += da.colwise().sum();
        };
        weight(p.w_z, daz, xm);
        weight(p.w_r, dar, xm);
        weight(p.w_h, dac, xm);
        weight(p.u_z, daz, hm);
        weight(p.u_r, dar, hm);
        weight(p.u_h, dac, std::as_const(rh).map());
        bias(p.b_z, daz);
        bias(p.b_r, dar);
        bias(p.b_h, dac);
      });
}

}  // namespace anaphor
