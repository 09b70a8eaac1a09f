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

#ifndef ANAPHOR_TESTS_GRADCHECK_CASES_H_
#define ANAPHOR_TESTS_GRADCHECK_CASES_H_

// Randomized gradient-check cases shared by the unit tests and the
// acceptance driver.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "anaphor/agents.h"
#include "anaphor/autodiff.h"
#include "anaphor/nn.h"
#include "gradcheck.h"

namespace anaphor::testing {

// Each case builds a scalar from random inputs of shape (n, d); callers draw
// n and d per configuration.
struct OpCase {
  const char* name;
  std::function<std::vector<Tensor>(Rng&, int n, int d)> inputs;
  testing::ScalarFn fn;
};

inline std::vector<OpCase> OpCases() {
  auto two = [](Rng& rng, int n, int d) {
    return std::vector<Tensor>{RandomTensor(n, d, rng), RandomTensor(n, d, rng)};
  };
  auto one = [](Rng& rng, int n, int d) {
    return std::vector<Tensor>{RandomTensor(n, d, rng, 2.0)};
  };
  return {
      {"Linear",
       [](Rng& rng, int n, int d) {
         return std::vector<Tensor>{RandomTensor(n, d, rng), RandomTensor(d + 1, d, rng),
                                    RandomTensor(1, d + 1, rng)};
       },
       [](Tape&, const std::vector<Var>& v) {
         return Scalarize(Linear(v[0], v[1], v[2]), 1);
       }},
      {"MatMulT",
       [](Rng& rng, int n, int d) {
         return std::vector<Tensor>{RandomTensor(n, d, rng), RandomTensor(2, d, rng)};
       },
       [](Tape&, const std::vector<Var>& v) { return Scalarize(MatMulT(v[0], v[1]), 2); }},
      {"Add", two, [](Tape&, const std::vector<Var>& v) { return Scalarize(Add(v[0], v[1]), 3); }},
      {"Sub", two, [](Tape&, const std::vector<Var>& v) { return Scalarize(Sub(v[0], v[1]), 4); }},
      {"Mul", two, [](Tape&, const std::vector<Var>& v) { return Scalarize(Mul(v[0], v[1]), 5); }},
      {"OneMinus", one, [](Tape&, const std::vector<Var>& v) { return Scalarize(OneMinus(v[0]), 6); }},
      {"Scale", one, [](Tape&, const std::vector<Var>& v) { return Scalarize(Scale(v[0], -1.7), 7); }},
      {"Sigmoid", one, [](Tape&, const std::vector<Var>& v) { return Scalarize(Sigmoid(v[0]), 8); }},
      {"Tanh", one, [](Tape&, const std::vector<Var>& v) { return Scalarize(Tanh(v[0]), 9); }},
      {"GatherRows",
       [](Rng& rng, int, int d) { return std::vector<Tensor>{RandomTensor(4, d, rng)}; },
       [](Tape&, const std::vector<Var>& v) {
         std::vector<int> ids = {3, 0, 3, 1, 2};
         return Scalarize(GatherRows(v[0], ids), 10);
       }},
      {"BroadcastRows",
       [](Rng& rng, int, int d) { return std::vector<Tensor>{RandomTensor(1, d, rng)}; },
       [](Tape&, const std::vector<Var>& v) { return Scalarize(BroadcastRows(v[0], 3), 11); }},
      {"Blend", two,
       [](Tape&, const std::vector<Var>& v) {
         std::vector<double> mask(static_cast<size_t>(v[0].rows()));
         for (size_t i = 0; i < mask.size(); ++i) mask[i] = i % 2 == 0 ? 1.0 : 0.0;
         return Scalarize(Blend(mask, v[0], v[1]), 12);
       }},
      {"Softmax", one, [](Tape&, const std::vector<Var>& v) { return Scalarize(Softmax(v[0]), 13); }},
      {"LogSoftmaxPick", one,
       [](Tape&, const std::vector<Var>& v) {
         std::vector<int> ids(static_cast<size_t>(v[0].rows()));
         for (size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i) % v[0].cols();
         return Scalarize(LogSoftmaxPick(v[0], ids), 14);
       }},
      {"RowEntropy", one, [](Tape&, const std::vector<Var>& v) { return Scalarize(RowEntropy(v[0]), 15); }},
      {"BlockCrossEntropy",
       [](Rng& rng, int n, int) { return std::vector<Tensor>{RandomTensor(n, 7, rng, 2.0)}; },
       [](Tape&, const std::vector<Var>& v) {
         const Block blocks[] = {{0, 3}, {3, 1}, {4, 3}};
         std::vector<int> targets;
         for (int i = 0; i < v[0].rows(); ++i) {
           targets.insert(targets.end(), {i % 3, 0, (i + 1) % 3});
         }
         return Scalarize(BlockCrossEntropy(v[0], blocks, targets), 16);
       }},
      {"Sum", one, [](Tape&, const std::vector<Var>& v) { return Sum(Mul(v[0], v[0])); }},
      {"Mean", one, [](Tape&, const std::vector<Var>& v) { return Mean(Mul(v[0], v[0])); }},
      {"WeightedSum", one, [](Tape&, const std::vector<Var>& v) { return Scalarize(v[0], 17); }},
      {"GruStep",
       [](Rng& rng, int n, int d) {
         std::vector<Tensor> in = {RandomTensor(n, d, rng), RandomTensor(n, 3, rng)};
         for (int i = 0; i < 3; ++i) in.push_back(RandomTensor(3, d, rng));
         for (int i = 0; i < 3; ++i) in.push_back(RandomTensor(3, 3, rng));
         for (int i = 0; i < 3; ++i) in.push_back(RandomTensor(1, 3, rng));
         return in;
       },
       [](Tape&, const std::vector<Var>& v) {
         GruVars p{v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10]};
         return Scalarize(GruStep(v[0], v[1], p), 18);
       }},
  };
}

inline double ReceiverBatchLoss(const ReceiverParams& p, const std::vector<const Signal*>& signals,
                         const std::vector<Meaning>& targets, const Vocabulary& vocab) {
  Tape tape(/*record_gradients=*/false);
  std::vector<int> flat;
  for (const Meaning& m : targets) flat.insert(flat.end(), m.words.begin(), m.words.end());
  return Mean(BlockCrossEntropy(ReceiverLogits(tape, p, signals), RoleBlocks(vocab), flat))
      .value()[0];
}

// Worst relative error of the composite Receiver loss gradient (mean block
// cross-entropy over a padded batch) for one random configuration.
inline double ReceiverLossGradError(int config) {
  const Vocabulary vocab = Vocabulary::WithSizes(3, 2);
  Rng rng(1000 + config);
  ReceiverParams p = ReceiverParams::Init(vocab, Alphabet{5}, 4, rng);
  std::vector<Signal> owned;
  std::vector<Meaning> targets;
  for (int i = 0; i < 3; ++i) {
    Signal s;
    const int len = 1 + static_cast<int>(rng.UniformInt(4));
    for (int k = 0; k < len; ++k) s.push_back(1 + static_cast<int>(rng.UniformInt(5)));
    s.push_back(kEos);
    owned.push_back(s);
    targets.push_back(Meaning::Of(static_cast<int>(rng.UniformInt(3)),
                                  static_cast<int>(rng.UniformInt(2)),
                                  static_cast<int>(rng.UniformInt(3)),
                                  static_cast<int>(rng.UniformInt(2))));
  }
  std::vector<const Signal*> signals;
  for (const Signal& s : owned) signals.push_back(&s);

  Tape tape;
  std::vector<int> flat;
  for (const Meaning& m : targets) flat.insert(flat.end(), m.words.begin(), m.words.end());
  tape.Backward(Mean(BlockCrossEntropy(ReceiverLogits(tape, p, signals), RoleBlocks(vocab), flat)));
  const std::vector<Tensor> grads = tape.ParamGrads(p.store);

  double worst = 0.0;
  const double eps = 1e-5;
  for (size_t k = 0; k < grads.size(); ++k) {
    Tensor& value = p.store.at(static_cast<int>(k)).value;
    for (size_t i = 0; i < value.size(); ++i) {
      const double saved = value[i];
      value[i] = saved + eps;
      const double up = ReceiverBatchLoss(p, signals, targets, vocab);
      value[i] = saved - eps;
      const double down = ReceiverBatchLoss(p, signals, targets, vocab);
      value[i] = saved;
      const double numeric = (up - down) / (2 * eps);
      const double denom = std::max({std::abs(grads[k][i]), std::abs(numeric), 1e-6});
      worst = std::max(worst, std::abs(grads[k][i] - numeric) / denom);
    }
  }
  return worst;
}

}  // namespace anaphor::testing

#endif  // ANAPHOR_TESTS_GRADCHECK_CASES_H_
