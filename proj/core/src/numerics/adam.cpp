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

#include "ddi/numerics/adam.hpp"

#include <cmath>
#include <string>

#include "ddi/errors.hpp"

namespace ddi {

AdamState make_adam_state(const AdamConfig& config, std::span<const Tensor* const> params) {
  AdamState state;
  state.config = config;
  for (const Tensor* p : params) {
    state.first_moment.emplace_back(p->size(), 0.0);
    state.second_moment.emplace_back(p->size(), 0.0);
  }
  return state;
}

void adam_step(std::span<Tensor* const> params, AdamState& state) {
  if (params.size() != state.first_moment.size()) {
    throw ShapeMismatch("adam: " + std::to_string(params.size()) + " parameters for state of " +
                        std::to_string(state.first_moment.size()));
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    const Tensor& p = *params[k];
    if (p.size() != state.first_moment[k].size() || p.grad().size() != p.size()) {
      throw ShapeMismatch("adam: parameter " + std::to_string(k) + " has shape " + shape_string(p.shape()) +
                          " but moments of size " + std::to_string(state.first_moment[k].size()));
    }
  }

  const auto& c = state.config;
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(c.beta1, t);
  const double correction2 = 1.0 - std::pow(c.beta2, t);

  for (std::size_t k = 0; k < params.size(); ++k) {
    Tensor& p = *params[k];
    auto g = p.grad();
    auto& m = state.first_moment[k];
    auto& v = state.second_moment[k];
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g[i];
      v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * g[i] * g[i];
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      p[i] -= c.lr * m_hat / (std::sqrt(v_hat) + c.epsilon);
    }
  }
}

}  // namespace ddi
