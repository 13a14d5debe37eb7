// Copyright 2026 The ddi_attn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ddi/evaluation/prediction.hpp"
#include "ddi/training/model.hpp"

namespace ddi {

inline constexpr double kProbabilityFloor = 1e-12;

// -ln(max(o[label], 1e-12)).
double instance_loss(std::span<const double> probabilities, DdiLabel label);

// Σ θ² over the regularized tensors; embeddings count only when `include_embeddings`.
double l2_penalty(const ModelParams& params, bool include_embeddings);

// J = mean(losses) + λ Σ θ². Throws EmptyBatch on an empty batch.
double objective(std::span<const double> losses, const ModelParams& params, double lambda, bool include_embeddings);

struct BatchResult {
  double objective = 0.0;  // J including the L² term
  double mean_loss = 0.0;
  std::vector<Tensor> h_stars;  // per batch member, values only
};

// Evaluates J over a batch in training mode. Instance k draws its dropout mask from
// derive_seed(dropout_seed, k, 0). When `with_gradient` is set, dJ/dθ is added to the
// grads of the trainable tensors (callers zero them first). Up to `threads` instances run
// concurrently; their gradients are merged in batch order, so the result does not
// depend on the thread count.
BatchResult evaluate_batch(ModelParams& params, const TrainConfig& config, std::span<const Instance* const> batch,
                           const RelevantStore& store, std::uint64_t dropout_seed, bool with_gradient,
                           std::size_t threads = 1);

struct TraceRow {
  std::size_t step = 0;
  double train_objective = 0.0;
  double heldout_objective = 0.0;
  double heldout_f1 = 0.0;
};

struct TrainHooks {
  std::function<void(const TraceRow&)> on_trace;
  std::function<void(std::size_t step, const ModelParams&, const RelevantStore&)> on_checkpoint;
};

struct TrainResult {
  ModelParams params;
  RelevantStore store;
  std::vector<TraceRow> trace;
  std::vector<double> step_objectives;  // train-batch J per step
};

// Runs config.max_steps Adam steps on mini-batches drawn uniformly with replacement.
// After each step the batch's h* values are appended to the relevant store (when
// sentence attention is on). Every eval_every steps a trace row is recorded from the
// held-out set; every checkpoint_every steps on_checkpoint fires.
TrainResult train(std::span<const Instance> training, const EncodedCorpus& heldout, const TrainConfig& config,
                  ModelParams initial, const TrainHooks& hooks = {}, std::size_t threads = 1);

// Deterministic inference (no dropout, frozen store). Rejected instances come back as
// predicted False with `rejected` set. Output follows instance ordinals.
std::vector<Prediction> predict(const ModelParams& params, const ModelConfig& config, const RelevantStore& store,
                                const EncodedCorpus& corpus, std::size_t threads = 1);

std::vector<Prediction> predict(const ModelParams& params, const ModelConfig& config, const RelevantStore& store,
                                std::span<const Instance> instances, std::size_t threads = 1);

// Argmax with ties broken toward the lower label index.
DdiLabel argmax_label(std::span<const double> probabilities);

// Worker count from DDI_ATTN_THREADS, else hardware concurrency; at least 1.
std::size_t default_thread_count();

}  // namespace ddi
