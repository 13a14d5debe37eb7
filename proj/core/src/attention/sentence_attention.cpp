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

#include "ddi/attention/sentence_attention.hpp"

#include "ddi/corpus/label.hpp"
#include "ddi/errors.hpp"
#include "ddi/numerics/ops.hpp"

namespace ddi {

SentenceAttentionParams make_sentence_attention_params(std::size_t d_h, std::mt19937_64& rng) {
  SentenceAttentionParams p{Tensor(Shape{d_h}), Tensor(Shape{d_h})};
  fill_uniform(p.A_diag, -0.1, 0.1, rng);
  fill_uniform(p.r, -0.1, 0.1, rng);
  return p;
}

ClassifierParams make_classifier_params(std::size_t d_h, std::mt19937_64& rng) {
  ClassifierParams p{Tensor(Shape{kNumLabels, d_h}), Tensor(Shape{kNumLabels})};
  fill_uniform(p.M, -0.1, 0.1, rng);
  fill_uniform(p.b_cls, -0.1, 0.1, rng);
  return p;
}

void RelevantStore::insert(const PairKey& key, std::span<const double> h_star) {
  if (dim_ == 0) dim_ = h_star.size();
  if (h_star.size() != dim_) {
    throw ShapeMismatch("store holds vectors of " + std::to_string(dim_) + ", got " +
                        std::to_string(h_star.size()));
  }
  if (capacity_ == 0) return;
  auto& buf = entries_[key];
  buf.emplace_back(h_star.begin(), h_star.end());
  while (buf.size() > capacity_) buf.pop_front();
}

const std::deque<std::vector<double>>& RelevantStore::find(const PairKey& key) const {
  static const std::deque<std::vector<double>> kEmpty;
  auto it = entries_.find(key);
  return it == entries_.end() ? kEmpty : it->second;
}

std::size_t RelevantStore::vector_count() const {
  std::size_t n = 0;
  for (const auto& [key, buf] : entries_) n += buf.size();
  return n;
}

SentenceAttention attend_sentences(Graph& g, Var current, const PairKey& key, const RelevantStore& store,
                                   const SentenceAttentionParams& params) {
  const std::size_t d_h = current.value().size();
  if (current.shape() != Shape{d_h} || params.A_diag.shape() != Shape{d_h} || params.r.shape() != Shape{d_h}) {
    throw ShapeMismatch("attend_sentences: h* " + shape_string(current.shape()) + ", A " +
                        shape_string(params.A_diag.shape()) + ", r " + shape_string(params.r.shape()));
  }
  std::vector<Var> members;
  for (const auto& stored : store.find(key)) {
    if (stored.size() != d_h) throw ShapeMismatch("stored feature vector has the wrong length");
    members.push_back(g.constant(Tensor(Shape{d_h}, stored)));
  }
  members.push_back(current);

  Var L = stack_columns(members);  // [d_h x N]
  Var query = mul(g.parameter(params.A_diag), g.parameter(params.r));
  Var e = matmul(transpose(L), query);
  Var alpha = softmax(e);
  Var s = matmul(L, alpha);
  return {s, alpha};
}

void update_store(RelevantStore& store, const PairKey& key, const Tensor& h_star) {
  store.insert(key, h_star.data());
}

Var classify(Graph& g, Var s, const ClassifierParams& params) {
  if (params.M.rank() != 2 || params.M.rows() != kNumLabels || s.shape() != Shape{params.M.cols()}) {
    throw ShapeMismatch("classify: M " + shape_string(params.M.shape()) + ", s " + shape_string(s.shape()));
  }
  return softmax(add(matmul(g.parameter(params.M), s), g.parameter(params.b_cls)));
}

}  // namespace ddi
