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
#include <random>
#include <vector>

#include "ddi/numerics/graph.hpp"

namespace ddi {

// One GRU direction. Input weights are [d_h x d], recurrent weights [d_h x d_h].
// Bias vectors exist only when `has_bias` is set; the default cell has none.
struct GruParams {
  Tensor W_r, U_r;  // reset gate
  Tensor W, U;      // candidate state
  Tensor W_z, U_z;  // update gate
  Tensor b_r, b_h, b_z;
  bool has_bias = false;

  std::size_t input_dim() const { return W.cols(); }
  std::size_t hidden_dim() const { return W.rows(); }
};

// Uniform(-0.1, 0.1) weights; biases start at zero.
GruParams make_gru_params(std::size_t d, std::size_t d_h, bool bias, std::mt19937_64& rng);

//   r = σ(W_r x + U_r h)
//   h̃ = tanh(W x + U (r ⊗ h))
//   z = σ(W_z x + U_z h)
//   h' = z ⊗ h + (1 - z) ⊗ h̃
Var gru_step(Graph& graph, Var x, Var h_prev, const GruParams& p);

// H is [d_h x t_max]; mask marks real (non-PAD) columns.
struct EncodedSentence {
  Var H;
  std::vector<bool> mask;
};

// Runs both directions over the real positions of X ([d x t_max]) and sums them per
// column. PAD positions are skipped by the recurrence and yield zero columns.
//
// In training, each real timestep is dropped with probability dropout_p: its column is
// zero and both recurrences carry their state across it unchanged. At inference nothing
// is dropped and every column is scaled by (1 - dropout_p).
EncodedSentence encode_bidirectional(Graph& graph, Var X, const std::vector<bool>& mask, const GruParams& fwd,
                                     const GruParams& bwd, double dropout_p, bool training,
                                     std::mt19937_64& rng);

}  // namespace ddi
