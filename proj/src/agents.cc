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

#include "anaphor/agents.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "anaphor/nn.h"

namespace anaphor {
namespace {

constexpr int kPredictChunk = 1024;

Tensor MeaningBatch(std::span<const Meaning> meanings, const Vocabulary& vocab) {
  Tensor t(static_cast<int>(meanings.size()), vocab.VectorSize());
  for (size_t i = 0; i < meanings.size(); ++i) {
    EncodeMeaningInto(meanings[i], vocab, t.row(static_cast<int>(i)));
  }
  return t;
}

std::vector<int> TargetMatrix(std::span<const Meaning> meanings) {
  std::vector<int> targets;
  targets.reserve(meanings.size() * kNumRoles);
  for (const Meaning& m : meanings) {
    targets.insert(targets.end(), m.words.begin(), m.words.end());
  }
  return targets;
}

bool RowMatches(std::span<const double> logits, std::span<const Block> blocks,
                const Meaning& target) {
  for (size_t b = 0; b < blocks.size(); ++b) {
    auto block = logits.subspan(static_cast<size_t>(blocks[b].offset),
                                static_cast<size_t>(blocks[b].size));
    if (Argmax(block) != target.words[b]) return false;
  }
  return true;
}

}  // namespace

SenderParams SenderParams::Init(const Vocabulary& vocab, const Alphabet& alphabet,
                                int hidden, Rng& rng) {
  SenderParams p;
  p.meaning_size = vocab.VectorSize();
  p.hidden = hidden;
  p.num_symbols = alphabet.total();
  const double k = 1.0 / std::sqrt(static_cast<double>(hidden));
  p.store.Add("sender.meaning.W", UniformTensor(hidden, p.meaning_size, k, rng));
  p.store.Add("sender.meaning.b", UniformTensor(1, hidden, k, rng));
  p.store.Add("sender.embedding", UniformTensor(p.num_symbols, hidden, k, rng));
  p.store.Add("sender.sos", UniformTensor(1, hidden, k, rng));
  AddGruParams(p.store, "sender.gru", hidden, hidden, rng);
  p.store.Add("sender.out.W", UniformTensor(p.num_symbols, hidden, k, rng));
  p.store.Add("sender.out.b", UniformTensor(1, p.num_symbols, k, rng));
  return p;
}

ReceiverParams ReceiverParams::Init(const Vocabulary& vocab, const Alphabet& alphabet,
                                    int hidden, Rng& rng) {
  ReceiverParams p;
  p.hidden = hidden;
  p.num_symbols = alphabet.total();
  p.output_size = vocab.VectorSize();
  const double k = 1.0 / std::sqrt(static_cast<double>(hidden));
  p.store.Add("receiver.embedding", UniformTensor(p.num_symbols, hidden, k, rng));
  AddGruParams(p.store, "receiver.gru", hidden, hidden, rng);
  p.store.Add("receiver.out.W", UniformTensor(p.output_size, hidden, k, rng));
  p.store.Add("receiver.out.b", UniformTensor(1, p.output_size, k, rng));
  return p;
}

Meaning ReceiverPrediction::Argmax() const {
  Meaning m;
  for (int r = 0; r < kNumRoles; ++r) m.words[static_cast<size_t>(r)] = anaphor::Argmax(roles[static_cast<size_t>(r)]);
  return m;
}

SenderGraph SenderForwardBatch(Tape& tape, const SenderParams& p,
                               std::span<const Meaning> meanings,
                               const Vocabulary& vocab, DecodeMode mode,
                               Rng& rng, int max_len) {
  if (max_len < 1) throw std::invalid_argument("SenderForward: max_len < 1");
  const int n = static_cast<int>(meanings.size());
  const ParamStore& s = p.store;
  Var h = Linear(tape.Constant(MeaningBatch(meanings, vocab)),
                 tape.Param(s, "sender.meaning.W"), tape.Param(s, "sender.meaning.b"));
  Var x = BroadcastRows(tape.Param(s, "sender.sos"), n);
  const GruVars gru = BindGru(tape, s, "sender.gru");
  Var out_w = tape.Param(s, "sender.out.W");
  Var out_b = tape.Param(s, "sender.out.b");
  Var embedding = tape.Param(s, "sender.embedding");

  SenderGraph graph;
  graph.rollouts.resize(static_cast<size_t>(n));
  std::vector<bool> active(static_cast<size_t>(n), true);
  int num_active = n;
  std::vector<int> symbols(static_cast<size_t>(n), kEos);
  std::vector<double> probs(static_cast<size_t>(p.num_symbols));
  for (int t = 0; t < max_len && num_active > 0; ++t) {
    h = GruStep(x, h, gru);
    Var logits = Linear(h, out_w, out_b);
    const Tensor& z = logits.value();
    Tensor mask(n, 1);
    for (int i = 0; i < n; ++i) {
      if (!active[static_cast<size_t>(i)]) {
        symbols[static_cast<size_t>(i)] = kEos;
        continue;
      }
      mask(i, 0) = 1.0;
      probs = Softmax(z.row(i));
      symbols[static_cast<size_t>(i)] =
          mode == DecodeMode::kSample ? CategoricalSample(probs, rng) : Argmax(probs);
    }
    Var log_probs = LogSoftmaxPick(logits, symbols);
    Var entropies = RowEntropy(logits);
    for (int i = 0; i < n; ++i) {
      if (!active[static_cast<size_t>(i)]) continue;
      SenderRollout& r = graph.rollouts[static_cast<size_t>(i)];
      const int sym = symbols[static_cast<size_t>(i)];
      r.signal.push_back(sym);
      r.log_probs.push_back(log_probs.value()(i, 0));
      r.entropies.push_back(entropies.value()(i, 0));
      if (sym == kEos) {
        active[static_cast<size_t>(i)] = false;
        --num_active;
      }
    }
    graph.step_log_probs.push_back(log_probs);
    graph.step_entropies.push_back(entropies);
    graph.step_masks.push_back(std::move(mask));
    if (num_active > 0 && t + 1 < max_len) x = GatherRows(embedding, symbols);
  }
  for (SenderRollout& r : graph.rollouts) {
    if (r.signal.empty() || r.signal.back() != kEos) r.signal.push_back(kEos);
    r.length = static_cast<int>(r.signal.size()) - 1;
  }
  return graph;
}

SenderRollout SenderForward(const MeaningVector& mv, const SenderParams& p,
                            DecodeMode mode, Rng& rng, int max_len) {
  if (max_len < 1) throw std::invalid_argument("SenderForward: max_len < 1");
  if (static_cast<int>(mv.size()) != p.meaning_size) {
    throw std::invalid_argument("SenderForward: meaning vector size mismatch");
  }
  Tape tape(/*record_gradients=*/false);
  const Tensor row = Tensor::RowVector(mv);
  const ParamStore& st = p.store;
  Var h = Linear(tape.Constant(row), tape.Param(st, "sender.meaning.W"),
                 tape.Param(st, "sender.meaning.b"));
  Var x = tape.Param(st, "sender.sos");
  const GruVars gru = BindGru(tape, st, "sender.gru");
  Var out_w = tape.Param(st, "sender.out.W");
  Var out_b = tape.Param(st, "sender.out.b");
  Var embedding = tape.Param(st, "sender.embedding");
  SenderRollout r;
  for (int t = 0; t < max_len; ++t) {
    h = GruStep(x, h, gru);
    Var logits = Linear(h, out_w, out_b);
    std::vector<double> probs = Softmax(logits.value().row(0));
    const int sym = mode == DecodeMode::kSample ? CategoricalSample(probs, rng) : Argmax(probs);
    r.signal.push_back(sym);
    r.log_probs.push_back(std::log(probs[static_cast<size_t>(sym)]));
    double entropy = 0.0;
    for (double q : probs) {
      if (q > 0.0) entropy -= q * std::log(q);
    }
    r.entropies.push_back(entropy);
    if (sym == kEos) break;
    const int ids[] = {sym};
    x = GatherRows(embedding, ids);
  }
  if (r.signal.back() != kEos) r.signal.push_back(kEos);
  r.length = static_cast<int>(r.signal.size()) - 1;
  return r;
}

Var ReceiverLogits(Tape& tape, const ReceiverParams& p,
                   std::span<const Signal* const> signals) {
  const int n = static_cast<int>(signals.size());
  size_t steps = 0;
  for (const Signal* s : signals) {
    if (s->empty() || s->back() != kEos) {
      throw std::invalid_argument("ReceiverForward: signal must end with EOS");
    }
    for (int sym : *s) {
      if (sym < 0 || sym >= p.num_symbols) {
        throw std::invalid_argument("ReceiverForward: symbol id out of range");
      }
    }
    steps = std::max(steps, s->size());
  }
  const ParamStore& st = p.store;
  Var embedding = tape.Param(st, "receiver.embedding");
  const GruVars gru = BindGru(tape, st, "receiver.gru");
  Var h = tape.Constant(Tensor(n, p.hidden));
  std::vector<int> symbols(static_cast<size_t>(n));
  std::vector<double> mask(static_cast<size_t>(n));
  for (size_t t = 0; t < steps; ++t) {
    bool all_active = true;
    for (int i = 0; i < n; ++i) {
      const Signal& s = *signals[static_cast<size_t>(i)];
      const bool live = t < s.size();
      symbols[static_cast<size_t>(i)] = live ? s[t] : kEos;
      mask[static_cast<size_t>(i)] = live ? 1.0 : 0.0;
      all_active = all_active && live;
    }
    Var next = GruStep(GatherRows(embedding, symbols), h, gru);
    h = all_active ? next : Blend(mask, next, h);
  }
  return Linear(h, tape.Param(st, "receiver.out.W"), tape.Param(st, "receiver.out.b"));
}

std::vector<Block> RoleBlocks(const Vocabulary& vocab) {
  std::vector<Block> blocks;
  for (Role role : kAllRoles) {
    blocks.push_back({vocab.BlockOffset(role), vocab.RoleSize(role)});
  }
  return blocks;
}

ReceiverPrediction PredictionFromLogits(std::span<const double> logits,
                                        const Vocabulary& vocab) {
  ReceiverPrediction pred;
  for (Role role : kAllRoles) {
    pred.roles[static_cast<size_t>(role)] =
        Softmax(logits.subspan(static_cast<size_t>(vocab.BlockOffset(role)),
                               static_cast<size_t>(vocab.RoleSize(role))));
  }
  return pred;
}

ReceiverPrediction ReceiverForward(const Signal& s, const ReceiverParams& p,
                                   const Vocabulary& vocab) {
  Tape tape(/*record_gradients=*/false);
  const Signal* ptrs[] = {&s};
  return PredictionFromLogits(ReceiverLogits(tape, p, ptrs).value().row(0), vocab);
}

std::vector<ReceiverPrediction> ReceiverPredictAll(const ReceiverParams& p,
                                                   std::span<const Signal> signals,
                                                   const Vocabulary& vocab) {
  std::vector<ReceiverPrediction> out;
  out.reserve(signals.size());
  for (size_t start = 0; start < signals.size(); start += kPredictChunk) {
    const size_t end = std::min(signals.size(), start + kPredictChunk);
    std::vector<const Signal*> ptrs;
    for (size_t i = start; i < end; ++i) ptrs.push_back(&signals[i]);
    Tape tape(/*record_gradients=*/false);
    const Tensor& logits = ReceiverLogits(tape, p, ptrs).value();
    for (int i = 0; i < logits.rows(); ++i) {
      out.push_back(PredictionFromLogits(logits.row(i), vocab));
    }
  }
  return out;
}

std::vector<Signal> SenderGreedySignals(const SenderParams& p,
                                        std::span<const Meaning> meanings,
                                        const Vocabulary& vocab, int max_len) {
  std::vector<Signal> out;
  out.reserve(meanings.size());
  Rng unused(0);
  for (size_t start = 0; start < meanings.size(); start += kPredictChunk) {
    const size_t end = std::min(meanings.size(), start + kPredictChunk);
    Tape tape(/*record_gradients=*/false);
    SenderGraph g = SenderForwardBatch(tape, p, meanings.subspan(start, end - start),
                                       vocab, DecodeMode::kGreedy, unused, max_len);
    for (SenderRollout& r : g.rollouts) out.push_back(std::move(r.signal));
  }
  return out;
}

double ReceiverLoss(const ReceiverPrediction& pred, const Meaning& target) {
  double loss = 0.0;
  for (Role role : kAllRoles) loss += CrossEntropy(pred[role], target[role]);
  return loss;
}

double SenderLoss(const SenderRollout& rollout, double recv_loss,
                  Baseline& baseline, double alpha, double entropy_coeff) {
  const double cost = recv_loss + alpha * rollout.length;
  double log_prob_sum = 0.0;
  double entropy_sum = 0.0;
  for (double lp : rollout.log_probs) log_prob_sum += lp;
  for (double e : rollout.entropies) entropy_sum += e;
  const double objective =
      (cost - baseline.mean) * log_prob_sum - entropy_coeff * entropy_sum;
  baseline.Update(cost);
  return objective;
}

StepMetrics TrainStepEmergent(std::span<const Meaning> batch, SenderParams& sender,
                              ReceiverParams& receiver, Baseline& baseline,
                              const Vocabulary& vocab,
                              const EmergentStepConfig& cfg, Rng& rng) {
  const int n = static_cast<int>(batch.size());
  if (n == 0) throw std::invalid_argument("TrainStepEmergent: empty batch");
  const double inv_n = 1.0 / n;

  Tape sender_tape;
  SenderGraph rollout = SenderForwardBatch(sender_tape, sender, batch, vocab,
                                           DecodeMode::kSample, rng, cfg.max_len);

  Tape receiver_tape;
  std::vector<const Signal*> signals;
  for (const SenderRollout& r : rollout.rollouts) signals.push_back(&r.signal);
  Var logits = ReceiverLogits(receiver_tape, receiver, signals);
  const std::vector<Block> blocks = RoleBlocks(vocab);
  const std::vector<int> targets = TargetMatrix(batch);
  Var per_item = BlockCrossEntropy(logits, blocks, targets);
  Var receiver_loss = Mean(per_item);
  receiver_tape.Backward(receiver_loss);
  AdamStep(receiver.store, receiver_tape.ParamGrads(receiver.store), cfg.receiver_lr);

  StepMetrics metrics;
  metrics.receiver_loss = receiver_loss.value()[0];
  Tensor coeff(n, 1);
  double mean_cost = 0.0;
  double hits = 0.0;
  double total_length = 0.0;
  for (int i = 0; i < n; ++i) {
    const SenderRollout& r = rollout.rollouts[static_cast<size_t>(i)];
    const double cost = per_item.value()(i, 0) + cfg.alpha * r.length;
    coeff(i, 0) = (cost - baseline.mean) * inv_n;
    mean_cost += cost * inv_n;
    total_length += r.length;
    if (RowMatches(logits.value().row(i), blocks, batch[static_cast<size_t>(i)])) hits += 1.0;
  }

  Var objective = sender_tape.Constant(Tensor(1, 1));
  double objective_value = 0.0;
  for (size_t t = 0; t < rollout.step_log_probs.size(); ++t) {
    const Tensor& mask = rollout.step_masks[t];
    Tensor lp_weight(n, 1);
    Tensor ent_weight(n, 1);
    for (int i = 0; i < n; ++i) {
      lp_weight(i, 0) = mask(i, 0) * coeff(i, 0);
      ent_weight(i, 0) = -cfg.entropy_coeff * mask(i, 0) * inv_n;
    }
    objective = Add(objective, WeightedSum(rollout.step_log_probs[t], lp_weight));
    objective = Add(objective, WeightedSum(rollout.step_entropies[t], ent_weight));
  }
  objective_value = objective.value()[0];
  sender_tape.Backward(objective);
  AdamStep(sender.store, sender_tape.ParamGrads(sender.store), cfg.sender_lr);
  baseline.Update(mean_cost);

  metrics.step = sender.store.step();
  metrics.sender_loss = objective_value;
  metrics.accuracy = hits * inv_n;
  metrics.mean_length = total_length * inv_n;
  return metrics;
}

StepMetrics TrainStepSupervised(
    std::span<const std::pair<Meaning, Signal>* const> batch,
    ReceiverParams& receiver, const Vocabulary& vocab, double lr) {
  if (batch.empty()) throw std::invalid_argument("TrainStepSupervised: empty batch");
  std::vector<const Signal*> signals;
  std::vector<Meaning> meanings;
  for (const auto* item : batch) {
    meanings.push_back(item->first);
    signals.push_back(&item->second);
  }
  Tape tape;
  Var logits = ReceiverLogits(tape, receiver, signals);
  const std::vector<Block> blocks = RoleBlocks(vocab);
  Var loss = Mean(BlockCrossEntropy(logits, blocks, TargetMatrix(meanings)));
  tape.Backward(loss);
  AdamStep(receiver.store, tape.ParamGrads(receiver.store), lr);

  StepMetrics metrics;
  metrics.step = receiver.store.step();
  metrics.receiver_loss = loss.value()[0];
  double hits = 0.0;
  for (size_t i = 0; i < meanings.size(); ++i) {
    if (RowMatches(logits.value().row(static_cast<int>(i)), blocks, meanings[i])) hits += 1.0;
  }
  metrics.accuracy = hits / static_cast<double>(meanings.size());
  return metrics;
}

double ExactMatchAccuracy(std::span<const ReceiverPrediction> preds,
                          std::span<const Meaning> targets) {
  if (preds.size() != targets.size()) {
    throw std::invalid_argument("ExactMatchAccuracy: size mismatch");
  }
  if (preds.empty()) return 0.0;
  size_t hits = 0;
  for (size_t i = 0; i < preds.size(); ++i) {
    if (preds[i].Argmax() == targets[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(preds.size());
}

}  // namespace anaphor
