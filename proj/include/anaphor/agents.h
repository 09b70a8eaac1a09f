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

#ifndef ANAPHOR_AGENTS_H_
#define ANAPHOR_AGENTS_H_

// Sender and Receiver policies of the reconstruction game, their losses,
// and the supervised and joint (REINFORCE + backprop) training steps.

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "anaphor/autodiff.h"
#include "anaphor/meanings.h"
#include "anaphor/params.h"
#include "anaphor/rng.h"
#include "anaphor/signal.h"

namespace anaphor {

// Linear meaning projection -> initial GRU state; the GRU consumes the
// previous symbol's embedding (a learned start embedding at step 0) and a
// linear head scores the |C|+1 symbols.
struct SenderParams {
  ParamStore store;
  int meaning_size = 0;
  int hidden = 0;
  int num_symbols = 0;  // |C| + 1

  static SenderParams Init(const Vocabulary& vocab, const Alphabet& alphabet,
                           int hidden, Rng& rng);
};

// Embedding -> GRU over the signal (through EOS) -> linear head read as one
// logit block per role.
struct ReceiverParams {
  ParamStore store;
  int hidden = 0;
  int num_symbols = 0;
  int output_size = 0;

  static ReceiverParams Init(const Vocabulary& vocab, const Alphabet& alphabet,
                             int hidden, Rng& rng);
};

enum class DecodeMode { kSample, kGreedy };

struct SenderRollout {
  Signal signal;
  // Chosen-symbol log-probabilities and policy entropies (nats), one per
  // emitted step including an emitted EOS. A forced terminal EOS has none.
  std::vector<double> log_probs;
  std::vector<double> entropies;
  // Symbols before EOS.
  int length = 0;
};

// Five per-role distributions.
struct ReceiverPrediction {
  std::array<std::vector<double>, kNumRoles> roles;

  const std::vector<double>& operator[](Role role) const {
    return roles[static_cast<size_t>(role)];
  }
  Meaning Argmax() const;
};

// Running arithmetic mean of the observed Sender costs.
struct Baseline {
  double mean = 0.0;
  int64_t count = 0;

  void Update(double value) {
    ++count;
    mean += (value - mean) / static_cast<double>(count);
  }
};

// Tape handles of a batched Sender rollout.
struct SenderGraph {
  std::vector<SenderRollout> rollouts;
  std::vector<Var> step_log_probs;   // n x 1 per step
  std::vector<Var> step_entropies;   // n x 1 per step
  std::vector<Tensor> step_masks;    // n x 1, 1 while the item is emitting
};

SenderGraph SenderForwardBatch(Tape& tape, const SenderParams& p,
                               std::span<const Meaning> meanings,
                               const Vocabulary& vocab, DecodeMode mode,
                               Rng& rng, int max_len);

SenderRollout SenderForward(const MeaningVector& mv, const SenderParams& p,
                            DecodeMode mode, Rng& rng, int max_len);

// Logits (n x output_size) for a batch of EOS-terminated signals.
Var ReceiverLogits(Tape& tape, const ReceiverParams& p,
                   std::span<const Signal* const> signals);

std::vector<Block> RoleBlocks(const Vocabulary& vocab);

ReceiverPrediction PredictionFromLogits(std::span<const double> logits,
                                        const Vocabulary& vocab);

ReceiverPrediction ReceiverForward(const Signal& s, const ReceiverParams& p,
                                   const Vocabulary& vocab);

// Batched inference in chunks.
std::vector<ReceiverPrediction> ReceiverPredictAll(const ReceiverParams& p,
                                                   std::span<const Signal> signals,
                                                   const Vocabulary& vocab);

// Greedy Sender signals for every meaning, batched.
std::vector<Signal> SenderGreedySignals(const SenderParams& p,
                                        std::span<const Meaning> meanings,
                                        const Vocabulary& vocab, int max_len);

// Sum over roles of the per-role cross-entropy (nats).
double ReceiverLoss(const ReceiverPrediction& pred, const Meaning& target);

// Objective value (cost - baseline) * sum(log_probs) - entropy_coeff *
// sum(entropies), with cost = recv_loss + alpha * |m|. The baseline is
// read, then updated with the cost.
double SenderLoss(const SenderRollout& rollout, double recv_loss,
                  Baseline& baseline, double alpha, double entropy_coeff);

struct StepMetrics {
  int64_t step = 0;
  double sender_loss = 0.0;
  double receiver_loss = 0.0;
  double accuracy = 0.0;
  double mean_length = 0.0;
};

struct EmergentStepConfig {
  double alpha = 0.0;
  double entropy_coeff = 0.01;
  double sender_lr = 0.001;
  double receiver_lr = 0.001;
  int max_len = 10;
};

// One joint update: sampled rollouts, Receiver loss on the true meanings,
// Adam on the mean Receiver loss, Adam on the mean REINFORCE objective.
StepMetrics TrainStepEmergent(std::span<const Meaning> batch, SenderParams& sender,
                              ReceiverParams& receiver, Baseline& baseline,
                              const Vocabulary& vocab,
                              const EmergentStepConfig& cfg, Rng& rng);

// Adam step on the mean Receiver loss over (meaning, signal) pairs.
StepMetrics TrainStepSupervised(
    std::span<const std::pair<Meaning, Signal>* const> batch,
    ReceiverParams& receiver, const Vocabulary& vocab, double lr);

// Fraction of items whose every role argmax equals the target.
double ExactMatchAccuracy(std::span<const ReceiverPrediction> preds,
                          std::span<const Meaning> targets);

}  // namespace anaphor

#endif  // ANAPHOR_AGENTS_H_
