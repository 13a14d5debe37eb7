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

#include "ddi/encoder/gru.hpp"

#include "ddi/errors.hpp"
#include "ddi/numerics/ops.hpp"

namespace ddi {

GruParams make_gru_params(std::size_t d, std::size_t d_h, bool bias, std::mt19937_64& rng) {
  GruParams p;
  for (Tensor* w : {&p.W_r, &p.W, &p.W_z}) {
    *w = Tensor(Shape{d_h, d});
    fill_uniform(*w, -0.1, 0.1, rng);
  }
  for (Tensor* u : {&p.U_r, &p.U, &p.U_z}) {
    *u = Tensor(Shape{d_h, d_h});
    fill_uniform(*u, -0.1, 0.1, rng);
  }
  p.has_bias = bias;
  if (bias) {
    p.b_r = Tensor(Shape{d_h});
    p.b_h = Tensor(Shape{d_h});
    p.b_z = Tensor(Shape{d_h});
  }
  return p;
}

Var gru_step(Graph& g, Var x, Var h_prev, const GruParams& p) {
  if (x.shape() != Shape{p.input_dim()} || h_prev.shape() != Shape{p.hidden_dim()}) {
    throw ShapeMismatch("gru_step: x " + shape_string(x.shape()) + ", h " + shape_string(h_prev.shape()) +
                        " for cell " + shape_string(p.W.shape()));
  }
  auto affine = [&](const Tensor& w, const Tensor& u, Var h, const Tensor& b) {
    Var pre = add(matmul(g.parameter(w), x), matmul(g.parameter(u), h));
    return p.has_bias ? add(pre, g.parameter(b)) : pre;
  };
  Var r = sigmoid(affine(p.W_r, p.U_r, h_prev, p.b_r));
  Var candidate = tanh(affine(p.W, p.U, mul(r, h_prev), p.b_h));
  Var z = sigmoid(affine(p.W_z, p.U_z, h_prev, p.b_z));
  Var keep = mul(z, h_prev);
  Var one_minus_z = add_scalar(scale(z, -1.0), 1.0);
  return add(keep, mul(one_minus_z, candidate));
}

EncodedSentence encode_bidirectional(Graph& g, Var X, const std::vector<bool>& mask, const GruParams& fwd,
                                     const GruParams& bwd, double dropout_p, bool training,
                                     std::mt19937_64& rng) {
  const Tensor& xv = X.value();
  if (xv.rank() != 2 || xv.cols() != mask.size() || xv.rows() != fwd.input_dim() ||
      fwd.W.shape() != bwd.W.shape()) {
    throw ShapeMismatch("encode_bidirectional: X " + shape_string(xv.shape()) + " with mask of " +
                        std::to_string(mask.size()));
  }
  const std::size_t t_max = mask.size();
  const std::size_t d_h = fwd.hidden_dim();

  std::vector<bool> active = mask;
  if (training && dropout_p > 0.0) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < t_max; ++i) {
      if (mask[i] && unit(rng) < dropout_p) active[i] = false;
    }
  }

  std::vector<Var> inputs(t_max);
  for (std::size_t i = 0; i < t_max; ++i) {
    if (active[i]) inputs[i] = column(X, i);
  }

  const Var zero = g.constant(Tensor(Shape{d_h}));
  std::vector<Var> forward_out(t_max), backward_out(t_max);
  Var h = zero;
  for (std::size_t i = 0; i < t_max; ++i) {
    if (!active[i]) continue;
    forward_out[i] = h = gru_step(g, inputs[i], h, fwd);
  }
  h = zero;
  for (std::size_t i = t_max; i-- > 0;) {
    if (!active[i]) continue;
    backward_out[i] = h = gru_step(g, inputs[i], h, bwd);
  }

  const bool rescale = !training && dropout_p > 0.0;
  std::vector<Var> columns(t_max, zero);
  for (std::size_t i = 0; i < t_max; ++i) {
    if (!active[i]) continue;
    Var c = add(forward_out[i], backward_out[i]);
    columns[i] = rescale ? scale(c, 1.0 - dropout_p) : c;
  }
  return {stack_columns(columns), mask};
}

}  // namespace ddi
