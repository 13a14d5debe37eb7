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
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ddi/attention/sentence_attention.hpp"
#include "ddi/corpus/instance.hpp"
#include "ddi/encoder/embedding.hpp"
#include "ddi/encoder/gru.hpp"
#include "ddi/encoder/word_attention.hpp"
#include "ddi/numerics/adam.hpp"

namespace ddi {

struct ModelConfig {
  std::size_t d_we = 100;
  std::size_t d_pe = 10;
  std::size_t d_h = 230;
  std::size_t t_max = kDefaultTMax;
  std::size_t position_clip = 0;  // 0 selects t_max - 1
  double dropout_p = 0.5;
  bool gru_bias = false;
  bool dynamic_embeddings = true;
  bool sentence_attention = true;
  std::size_t store_capacity = kDefaultStoreCapacity;

  std::size_t clip() const { return position_clip ? position_clip : t_max - 1; }
  std::size_t input_dim() const { return d_we + 2 * d_pe; }
  // Throws Error on non-positive dimensions or dropout outside [0, 1].
  void validate() const;
};

struct TrainConfig {
  ModelConfig model;
  std::size_t batch_size = 60;
  double lambda = 1e-4;
  AdamConfig adam;
  std::size_t max_steps = 1000;
  std::size_t eval_every = 100;
  std::size_t checkpoint_every = 100;
  std::uint64_t seed = 1;
  std::size_t min_count = 1;

  void validate() const;
};

std::string config_to_json(const TrainConfig& config);
TrainConfig config_from_json(std::string_view json);

// θ = {E_w, E_p, W_r, U_r, W, U, W_z, U_z (per direction), ω, A, r, M, b_cls}.
struct ModelParams {
  EmbeddingTables embeddings;
  GruParams forward;
  GruParams backward;
  Tensor omega;
  SentenceAttentionParams sentence;
  ClassifierParams classifier;

  // Every tensor of θ with its checkpoint name, in a fixed order.
  std::vector<std::pair<std::string, Tensor*>> named();
  std::vector<std::pair<std::string, const Tensor*>> named() const;

  // Tensors updated by the optimizer (embeddings only in dynamic mode).
  std::vector<Tensor*> trainable();
  void zero_grad() const;
  // Marks which tensors require grad according to the embedding mode.
  void configure(const ModelConfig& config);
};

// Random initialization (see make_embedding_tables and make_gru_params). Draws in a
// fixed order from `rng`, so a seed determines θ.
ModelParams init_params(const ModelConfig& config, std::size_t vocab_size, std::mt19937_64& rng);

// Throws CheckpointShapeMismatch when a tensor's shape disagrees with config/vocab size.
void validate_params(const ModelParams& params, const ModelConfig& config, std::size_t vocab_size);

struct ForwardPass {
  Var probabilities;     // o, [5]
  Var h_star;            // [d_h]
  Var s;                 // [d_h]; equals h_star when sentence attention is off
  Var word_weights;      // [t_max]
  Var sentence_weights;  // [N]; invalid when sentence attention is off
};

// embed -> BiGRU -> word attention -> (sentence attention) -> classifier.
ForwardPass forward(Graph& graph, const ModelParams& params, const ModelConfig& config, const Instance& instance,
                    const RelevantStore& store, bool training, std::mt19937_64& rng);

// SplitMix64-style mixing for per-step / per-instance seeds.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b);

}  // namespace ddi
