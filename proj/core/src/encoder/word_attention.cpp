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

#include "ddi/encoder/word_attention.hpp"

#include "ddi/errors.hpp"
#include "ddi/numerics/ops.hpp"

namespace ddi {

WordAttention word_attention(Graph& g, const EncodedSentence& encoded, const Tensor& omega) {
  const Var H = encoded.H;
  if (omega.shape() != Shape{H.value().rows()}) {
    throw ShapeMismatch("word_attention: ω " + shape_string(omega.shape()) + " for H " + shape_string(H.shape()));
  }
  Var scores = matmul(transpose(tanh(H)), g.parameter(omega));
  Var a = masked_softmax(scores, encoded.mask);
  Var h_star = tanh(matmul(H, a));
  return {h_star, a};
}

}  // namespace ddi
