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

#include "ddi/numerics/graph.hpp"

#include <algorithm>

#include "ddi/errors.hpp"

namespace ddi {

Var Graph::push(Node node) {
  if (nodes_.size() >= UINT32_MAX) throw Error("graph too large");
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<std::uint32_t>(nodes_.size() - 1));
}

Var Graph::constant(Tensor value) {
  Node n;
  n.owned = std::move(value);
  return push(std::move(n));
}

Var Graph::parameter(const Tensor& param) {
  if (auto it = leaves_.find(&param); it != leaves_.end()) return Var(this, it->second);
  Node n;
  n.ref = &param;
  if (grad_enabled_ && param.requires_grad()) {
    n.param = &param;
    n.needs_grad = true;
  }
  Var v = push(std::move(n));
  leaves_.emplace(&param, v.id());
  return v;
}

Var Graph::lookup_row(const Tensor& table, std::size_t row) {
  if (table.rank() != 2) throw ShapeMismatch("lookup_row needs a matrix, got " + shape_string(table.shape()));
  if (row >= table.rows()) {
    throw IndexOutOfVocab("row " + std::to_string(row) + " outside table of " + std::to_string(table.rows()));
  }
  const std::size_t width = table.cols();
  auto values = table.data().subspan(row * width, width);
  Node n;
  n.owned = Tensor(Shape{width}, std::vector<double>(values.begin(), values.end()));
  if (grad_enabled_ && table.requires_grad()) {
    n.needs_grad = true;
    const Tensor* t = &table;
    n.backward = [t, row](Graph& g, std::uint32_t self) { g.add_row_grad(*t, row, g.grad(self)); };
  }
  return push(std::move(n));
}

Var Graph::record(Tensor value, std::initializer_list<Var> parents, BackwardFn backward) {
  return record(std::move(value), std::span<const Var>(parents.begin(), parents.size()), std::move(backward));
}

Var Graph::record(Tensor value, std::span<const Var> parents, BackwardFn backward) {
  Node n;
  n.owned = std::move(value);
  if (grad_enabled_) {
    for (const Var& p : parents) {
      if (&p.graph() != this) throw Error("operation mixes variables from different graphs");
      if (nodes_[p.id()].needs_grad) n.needs_grad = true;
    }
  }
  if (n.needs_grad) n.backward = std::move(backward);
  return push(std::move(n));
}

std::span<double> Graph::grad_buffer(std::uint32_t id) {
  Node& n = nodes_[id];
  if (n.grad.empty()) n.grad.assign(node_value(id).size(), 0.0);
  return n.grad;
}

void Graph::add_row_grad(const Tensor& table, std::size_t row, std::span<const double> g) {
  auto& dst = row_grads_[&table][row];
  if (dst.empty()) dst.assign(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) dst[i] += g[i];
}

void Graph::backprop(Var loss) {
  if (&loss.graph() != this) throw Error("loss belongs to another graph");
  if (value(loss).rank() != 0) throw NotScalar("backward needs a rank-0 loss, got " + shape_string(loss.shape()));
  for (auto& n : nodes_) n.grad.clear();
  row_grads_.clear();
  if (!nodes_[loss.id()].needs_grad) return;

  grad_buffer(loss.id())[0] = 1.0;
  for (std::int64_t id = loss.id(); id >= 0; --id) {
    auto uid = static_cast<std::uint32_t>(id);
    Node& n = nodes_[uid];
    if (n.grad.empty() || !n.backward) continue;
    n.backward(*this, uid);
  }
}

void Graph::accumulate_into_parameters() {
  for (auto& n : nodes_) {
    if (n.param == nullptr || n.grad.empty()) continue;
    auto dst = n.param->grad();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += n.grad[i];
    n.grad.clear();
  }
  for (auto& [table, rows] : row_grads_) {
    auto dst = table->grad();
    const std::size_t width = table->cols();
    for (auto& [row, g] : rows) {
      for (std::size_t i = 0; i < width; ++i) dst[row * width + i] += g[i];
    }
  }
  row_grads_.clear();
}

void Graph::backward(Var loss) {
  backprop(loss);
  accumulate_into_parameters();
}

}  // namespace ddi
