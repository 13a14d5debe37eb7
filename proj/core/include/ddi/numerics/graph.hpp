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
#include <initializer_list>
#include <map>
#include <span>
#include <unordered_map>
#include <vector>

#include "ddi/numerics/tensor.hpp"

namespace ddi {

class Graph;

// Handle to a value recorded on a Graph.
class Var {
 public:
  Var() = default;

  bool valid() const { return graph_ != nullptr; }
  Graph& graph() const { return *graph_; }
  std::uint32_t id() const { return id_; }
  const Tensor& value() const;
  const Shape& shape() const { return value().shape(); }

 private:
  friend class Graph;
  Var(Graph* graph, std::uint32_t id) : graph_(graph), id_(id) {}

  Graph* graph_ = nullptr;
  std::uint32_t id_ = 0;
};

// Reverse-mode tape. Operations append nodes in execution order; backward visits them
// in exact reverse order. One graph is confined to one thread at a time.
class Graph {
 public:
  // Called during backprop with the graph and the node's own id.
  using BackwardFn = std::function<void(Graph&, std::uint32_t)>;

  explicit Graph(bool grad_enabled = true) : grad_enabled_(grad_enabled) {}
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  bool grad_enabled() const { return grad_enabled_; }

  Var constant(Tensor value);

  // Leaf that reads `param` in place. Gradients reach it only if grad is enabled and
  // `param.requires_grad()`. Repeated calls with the same tensor return the same leaf.
  Var parameter(const Tensor& param);

  // Row `row` of a matrix parameter as a vector. The gradient is kept per row, so
  // large embedding tables never get a dense per-graph buffer.
  Var lookup_row(const Tensor& table, std::size_t row);

  const Tensor& value(Var v) const { return node_value(v.id()); }
  std::size_t size() const { return nodes_.size(); }

  // backprop() followed by accumulate_into_parameters().
  void backward(Var loss);

  // Computes d(loss)/d(node) for every node, keeping parameter gradients inside the graph.
  // Throws NotScalar unless loss has rank 0.
  void backprop(Var loss);

  // Adds gradients gathered by the last backprop() into Tensor::grad of each parameter
  // and clears them from the graph.
  void accumulate_into_parameters();

  // Node-level access for operation implementations.
  Var record(Tensor value, std::initializer_list<Var> parents, BackwardFn backward);
  Var record(Tensor value, std::span<const Var> parents, BackwardFn backward);
  const Tensor& value_at(std::uint32_t id) const { return node_value(id); }
  bool needs_grad(std::uint32_t id) const { return nodes_[id].needs_grad; }
  std::span<const double> grad(std::uint32_t id) const { return nodes_[id].grad; }
  // Gradient buffer of a node, allocated on first use.
  std::span<double> grad_buffer(std::uint32_t id);
  void add_row_grad(const Tensor& table, std::size_t row, std::span<const double> g);

 private:
  struct Node {
    Tensor owned;
    const Tensor* ref = nullptr;      // leaf parameter value
    const Tensor* param = nullptr;    // set when gradients flow back into a parameter
    std::vector<double> grad;
    BackwardFn backward;
    bool needs_grad = false;
  };

  const Tensor& node_value(std::uint32_t id) const {
    const Node& n = nodes_[id];
    return n.ref != nullptr ? *n.ref : n.owned;
  }
  Var push(Node node);

  bool grad_enabled_;
  std::vector<Node> nodes_;
  std::unordered_map<const Tensor*, std::uint32_t> leaves_;
  // table -> row -> gradient. Ordered so accumulation order is reproducible.
  std::map<const Tensor*, std::map<std::size_t, std::vector<double>>> row_grads_;
};

inline const Tensor& Var::value() const { return graph_->value(*this); }

}  // namespace ddi
