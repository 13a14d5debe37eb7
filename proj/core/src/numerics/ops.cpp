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

#include "ddi/numerics/ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ddi/errors.hpp"

namespace ddi {
namespace {

void require_same(const Var& a, const Var& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw ShapeMismatch(std::string(op) + ": " + shape_string(a.shape()) + " vs " + shape_string(b.shape()));
  }
}

void require_rank(const Var& a, std::size_t rank, const char* op) {
  if (a.value().rank() != rank) {
    throw ShapeMismatch(std::string(op) + ": expected rank " + std::to_string(rank) + ", got " +
                        shape_string(a.shape()));
  }
}

// Elementwise binary op where either side may be a rank-0 scalar. `da`/`db` give the
// partial derivatives at (x, y).
template <typename F, typename DA, typename DB>
Var binary(Var a, Var b, const char* name, F f, DA da, DB db) {
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  const bool a_scalar = av.rank() == 0 && bv.rank() != 0;
  const bool b_scalar = bv.rank() == 0 && av.rank() != 0;
  if (!a_scalar && !b_scalar) require_same(a, b, name);
  Tensor out(a_scalar ? bv.shape() : av.shape());
  const std::size_t n = out.size();
  for (std::size_t i = 0; i < n; ++i) out[i] = f(av[a_scalar ? 0 : i], bv[b_scalar ? 0 : i]);

  const auto ia = a.id();
  const auto ib = b.id();
  return a.graph().record(std::move(out), {a, b}, [=](Graph& g, std::uint32_t self) {
    auto go = g.grad(self);
    const Tensor& x = g.value_at(ia);
    const Tensor& y = g.value_at(ib);
    if (g.needs_grad(ia)) {
      auto gx = g.grad_buffer(ia);
      for (std::size_t i = 0; i < n; ++i) {
        gx[a_scalar ? 0 : i] += go[i] * da(x[a_scalar ? 0 : i], y[b_scalar ? 0 : i]);
      }
    }
    if (g.needs_grad(ib)) {
      auto gy = g.grad_buffer(ib);
      for (std::size_t i = 0; i < n; ++i) {
        gy[b_scalar ? 0 : i] += go[i] * db(x[a_scalar ? 0 : i], y[b_scalar ? 0 : i]);
      }
    }
  });
}

// Pointwise op whose derivative is expressed through its output y.
template <typename F, typename D>
Var unary(Var a, F f, D dy) {
  const Tensor& av = a.value();
  Tensor out(av.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(av[i]);
  const auto ia = a.id();
  return a.graph().record(std::move(out), {a}, [=](Graph& g, std::uint32_t self) {
    auto go = g.grad(self);
    const Tensor& y = g.value_at(self);
    auto gx = g.grad_buffer(ia);
    for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += go[i] * dy(y[i]);
  });
}

void softmax_backward(Graph& g, std::uint32_t self, std::uint32_t input) {
  auto go = g.grad(self);
  const Tensor& y = g.value_at(self);
  double inner = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) inner += go[i] * y[i];
  auto gx = g.grad_buffer(input);
  for (std::size_t i = 0; i < y.size(); ++i) gx[i] += y[i] * (go[i] - inner);
}

}  // namespace

double stable_sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Var add(Var a, Var b) {
  return binary(
      a, b, "add", [](double x, double y) { return x + y; }, [](double, double) { return 1.0; },
      [](double, double) { return 1.0; });
}

Var sub(Var a, Var b) {
  return binary(
      a, b, "sub", [](double x, double y) { return x - y; }, [](double, double) { return 1.0; },
      [](double, double) { return -1.0; });
}

Var mul(Var a, Var b) {
  return binary(
      a, b, "mul", [](double x, double y) { return x * y; }, [](double, double y) { return y; },
      [](double x, double) { return x; });
}

Var scale(Var a, double factor) {
  const Tensor& av = a.value();
  Tensor out(av.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] * factor;
  const auto ia = a.id();
  return a.graph().record(std::move(out), {a}, [=](Graph& g, std::uint32_t self) {
    auto go = g.grad(self);
    auto gx = g.grad_buffer(ia);
    for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += go[i] * factor;
  });
}

Var add_scalar(Var a, double offset) {
  const Tensor& av = a.value();
  Tensor out(av.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] + offset;
  const auto ia = a.id();
  return a.graph().record(std::move(out), {a}, [=](Graph& g, std::uint32_t self) {
    auto go = g.grad(self);
    auto gx = g.grad_buffer(ia);
    for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += go[i];
  });
}

Var matmul(Var a, Var b) {
  require_rank(a, 2, "matmul");
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  const std::size_t m = av.rows();
  const std::size_t k = av.cols();
  const bool vec = bv.rank() == 1;
  if (!vec && bv.rank() != 2) throw ShapeMismatch("matmul: right operand " + shape_string(bv.shape()));
  if (bv.shape()[0] != k) {
    throw ShapeMismatch("matmul: " + shape_string(av.shape()) + " · " + shape_string(bv.shape()));
  }
  const std::size_t n = vec ? 1 : bv.cols();
  Tensor out(vec ? Shape{m} : Shape{m, n});
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = av[i * k + p];
      if (aip == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) out[i * n + j] += aip * bv[p * n + j];
    }
  }
  const auto ia = a.id();
  const auto ib = b.id();
  return a.graph().record(std::move(out), {a, b}, [=](Graph& g, std::uint32_t self) {
    auto go = g.grad(self);
    const Tensor& x = g.value_at(ia);
    const Tensor& y = g.value_at(ib);
    if (g.needs_grad(ia)) {  // dA = dC · Bᵀ
      auto gx = g.grad_buffer(ia);
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          const double gij = go[i * n + j];
          if (gij == 0.0) continue;
          for (std::size_t p = 0; p < k; ++p) gx[i * k + p] += gij * y[p * n + j];
        }
      }
    }
    if (g.needs_grad(ib)) {  // dB = Aᵀ · dC
      auto gy = g.grad_buffer(ib);
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
          const double aip = x[i * k + p];
          for (std::size_t j = 0; j < n; ++j) gy[p * n + j] += aip * go[i * n + j];
        }
      }
    }
  });
}

Var transpose(Var a) {
  require_rank(a, 2, "transpose");
  const Tensor& av = a.value();
  const std::size_t r = av.rows();
  const std::size_t c = av.cols();
  Tensor out(Shape{c, r});
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) out[j * r + i] = av[i * c + j];
  }
  const auto ia = a.id();
  return a.graph().record(std::move(out), {a}, [=](Graph& g, std::uint32_t self) {
    auto go = g.grad(self);
    auto gx = g.grad_buffer(ia);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < c; ++j) gx[i * c + j] += go[j * r + i];
    }
  });
}

Var sigmoid(Var a) {
  return unary(a, stable_sigmoid, [](double y) { return y * (1.0 - y); });
}

Var tanh(Var a) {
  return unary(a, [](double x) { return std::tanh(x); }, [](double y) { return 1.0 - y * y; });
}

Var softmax(Var v) {
  require_rank(v, 1, "softmax");
  const Tensor& x = v.value();
  if (x.size() == 0) throw ShapeMismatch("softmax of an empty vector");
  const double mx = *std::max_element(x.data().begin(), x.data().end());
  Tensor out(x.shape());
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) total += (out[i] = std::exp(x[i] - mx));
  for (auto& y : out.data()) y /= total;
  const auto iv = v.id();
  return v.graph().record(std::move(out), {v},
                          [iv](Graph& g, std::uint32_t self) { softmax_backward(g, self, iv); });
}

Var masked_softmax(Var v, const std::vector<bool>& mask) {
  require_rank(v, 1, "masked_softmax");
  const Tensor& x = v.value();
  if (mask.size() != x.size()) {
    throw ShapeMismatch("masked_softmax: mask of " + std::to_string(mask.size()) + " for " +
                        shape_string(x.shape()));
  }
  double mx = -INFINITY;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (mask[i]) mx = std::max(mx, x[i]);
  }
  if (mx == -INFINITY) throw AllPadded("masked_softmax: no unmasked position");
  Tensor out(x.shape());
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (mask[i]) total += (out[i] = std::exp(x[i] - mx));
  }
  for (auto& y : out.data()) y /= total;
  // Masked outputs are exactly zero, so the plain softmax Jacobian leaves them untouched.
  const auto iv = v.id();
  return v.graph().record(std::move(out), {v},
                          [iv](Graph& g, std::uint32_t self) { softmax_backward(g, self, iv); });
}

Var sum(Var a) {
  const Tensor& av = a.value();
  double total = 0.0;
  for (double x : av.data()) total += x;
  const auto ia = a.id();
  return a.graph().record(Tensor::scalar(total), {a}, [ia](Graph& g, std::uint32_t self) {
    const double go = g.grad(self)[0];
    for (auto& gx : g.grad_buffer(ia)) gx += go;
  });
}

Var dot(Var a, Var b) {
  require_rank(a, 1, "dot");
  require_same(a, b, "dot");
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  double total = 0.0;
  for (std::size_t i = 0; i < av.size(); ++i) total += av[i] * bv[i];
  const auto ia = a.id();
  const auto ib = b.id();
  return a.graph().record(Tensor::scalar(total), {a, b}, [ia, ib](Graph& g, std::uint32_t self) {
    const double go = g.grad(self)[0];
    const Tensor& x = g.value_at(ia);
    const Tensor& y = g.value_at(ib);
    if (g.needs_grad(ia)) {
      auto gx = g.grad_buffer(ia);
      for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += go * y[i];
    }
    if (g.needs_grad(ib)) {
      auto gy = g.grad_buffer(ib);
      for (std::size_t i = 0; i < gy.size(); ++i) gy[i] += go * x[i];
    }
  });
}

Var concat(std::span<const Var> parts) {
  if (parts.empty()) throw ShapeMismatch("concat of nothing");
  std::vector<double> values;
  std::vector<std::uint32_t> ids;
  std::vector<std::size_t> offsets;
  for (const Var& p : parts) {
    require_rank(p, 1, "concat");
    offsets.push_back(values.size());
    ids.push_back(p.id());
    auto d = p.value().data();
    values.insert(values.end(), d.begin(), d.end());
  }
  Tensor out = Tensor::vector(std::move(values));
  return parts.front().graph().record(std::move(out), parts, [ids, offsets](Graph& g, std::uint32_t self) {
    auto go = g.grad(self);
    for (std::size_t k = 0; k < ids.size(); ++k) {
      if (!g.needs_grad(ids[k])) continue;
      auto gx = g.grad_buffer(ids[k]);
      for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += go[offsets[k] + i];
    }
  });
}

Var stack_columns(std::span<const Var> columns) {
  if (columns.empty()) throw ShapeMismatch("stack_columns of nothing");
  const std::size_t rows = columns.front().value().size();
  const std::size_t cols = columns.size();
  Tensor out(Shape{rows, cols});
  std::vector<std::uint32_t> ids;
  for (std::size_t j = 0; j < cols; ++j) {
    require_rank(columns[j], 1, "stack_columns");
    const Tensor& c = columns[j].value();
    if (c.size() != rows) throw ShapeMismatch("stack_columns: ragged column " + std::to_string(j));
    for (std::size_t i = 0; i < rows; ++i) out[i * cols + j] = c[i];
    ids.push_back(columns[j].id());
  }
  return columns.front().graph().record(std::move(out), columns, [ids, rows, cols](Graph& g, std::uint32_t self) {
    auto go = g.grad(self);
    for (std::size_t j = 0; j < cols; ++j) {
      if (!g.needs_grad(ids[j])) continue;
      auto gx = g.grad_buffer(ids[j]);
      for (std::size_t i = 0; i < rows; ++i) gx[i] += go[i * cols + j];
    }
  });
}

Var column(Var matrix, std::size_t j) {
  require_rank(matrix, 2, "column");
  const Tensor& m = matrix.value();
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  if (j >= cols) throw ShapeMismatch("column " + std::to_string(j) + " of " + shape_string(m.shape()));
  Tensor out(Shape{rows});
  for (std::size_t i = 0; i < rows; ++i) out[i] = m[i * cols + j];
  const auto im = matrix.id();
  return matrix.graph().record(std::move(out), {matrix}, [=](Graph& g, std::uint32_t self) {
    auto go = g.grad(self);
    auto gx = g.grad_buffer(im);
    for (std::size_t i = 0; i < rows; ++i) gx[i * cols + j] += go[i];
  });
}

Var neg_log_prob(Var p, std::size_t index, double floor) {
  require_rank(p, 1, "neg_log_prob");
  const Tensor& pv = p.value();
  if (index >= pv.size()) throw ShapeMismatch("neg_log_prob: index out of range");
  const double prob = pv[index];
  const bool floored = !(prob > floor);
  const double loss = -std::log(floored ? floor : prob);
  const auto ip = p.id();
  return p.graph().record(Tensor::scalar(loss), {p}, [=](Graph& g, std::uint32_t self) {
    if (floored) return;
    g.grad_buffer(ip)[index] += -g.grad(self)[0] / prob;
  });
}

}  // namespace ddi
