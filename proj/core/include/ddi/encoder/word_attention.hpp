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

#include "ddi/encoder/gru.hpp"

namespace ddi {

struct WordAttention {
  Var h_star;   // [d_h], entries in (-1, 1)
  Var weights;  // [t_max], zero at PAD positions
};

// a = softmax over real positions of ωᵀ tanh(H);  h* = tanh(H a).
// Throws AllPadded if the mask has no real position.
WordAttention word_attention(Graph& graph, const EncodedSentence& encoded, const Tensor& omega);

}  // namespace ddi
