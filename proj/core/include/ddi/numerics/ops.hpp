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
#include <span>
#include <vector>

#include "ddi/numerics/graph.hpp"

// Differentiable operations. Shapes must match exactly; the only broadcast is a rank-0
// operand in add/sub/mul. Violations throw ShapeMismatch.
namespace ddi {

Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);  // elementwise
Var scale(Var a, double factor);
Var add_scalar(Var a, double offset);

// [m x k]·[k x n] -> [m x n], or [m x k]·[k] -> [m].
Var matmul(Var a, Var b);
Var transpose(Var a);

Var sigmoid(Var a);
Var tanh(Var a);

// Numerically stable softmax of a vector.
Var softmax(Var v);
// Softmax over the positions where mask is true; the rest get exactly zero weight.
// Throws AllPadded when no position is selected.
Var masked_softmax(Var v, const std::vector<bool>& mask);

Var sum(Var a);
Var dot(Var a, Var b);

Var concat(std::span<const Var> parts);
// Stacks equal-length vectors as the columns of a matrix.
Var stack_columns(std::span<const Var> columns);
Var column(Var matrix, std::size_t j);

// -ln(max(p[index], floor)) for a probability vector p.
Var neg_log_prob(Var p, std::size_t index, double floor);

// Scalar helpers for values outside any graph.
double stable_sigmoid(double x);

}  // namespace ddi
