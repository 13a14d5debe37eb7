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
#include <deque>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ddi/corpus/pair_key.hpp"
#include "ddi/numerics/graph.hpp"

namespace ddi {

// The diagonal of A and the relation query r, both [d_h].
struct SentenceAttentionParams {
  Tensor A_diag;
  Tensor r;
};

// M [5 x d_h] and the class offset b_cls [5].
struct ClassifierParams {
  Tensor M;
  Tensor b_cls;
};

SentenceAttentionParams make_sentence_attention_params(std::size_t d_h, std::mt19937_64& rng);
ClassifierParams make_classifier_params(std::size_t d_h, std::mt19937_64& rng);

inline constexpr std::size_t kDefaultStoreCapacity = 32;

// Feature vectors h* of earlier instances, per drug pair, as plain values. Each key
// keeps at most `capacity` vectors in insertion order; the oldest is evicted first.
class RelevantStore {
 public:
  explicit RelevantStore(std::size_t capacity = kDefaultStoreCapacity, std::size_t dim = 0)
      : capacity_(capacity), dim_(dim) {}

  std::size_t capacity() const { return capacity_; }
  // Vector length; fixed by the first insert when constructed with 0.
  std::size_t dim() const { return dim_; }

  void insert(const PairKey& key, std::span<const double> h_star);
  // Stored vectors for `key`, oldest first; empty if the key is unknown.
  const std::deque<std::vector<double>>& find(const PairKey& key) const;

  std::size_t key_count() const { return entries_.size(); }
  std::size_t vector_count() const;
  const std::map<PairKey, std::deque<std::vector<double>>>& entries() const { return entries_; }

  bool operator==(const RelevantStore&) const = default;

 private:
  std::size_t capacity_;
  std::size_t dim_;
  std::map<PairKey, std::deque<std::vector<double>>> entries_;
};

struct SentenceAttention {
  Var s;      // [d_h]
  Var alpha;  // [N], stored members first, current instance last
};

// Attention over {stored vectors for key} ∪ {current}:
//   e_i = h*_iᵀ diag(A) r,   α = softmax(e),   s = Σ α_i h*_i.
// Stored vectors enter as constants; gradient reaches only current, A_diag and r.
SentenceAttention attend_sentences(Graph& graph, Var current, const PairKey& key, const RelevantStore& store,
                                   const SentenceAttentionParams& params);

// Appends a value copy of h* (training only).
void update_store(RelevantStore& store, const PairKey& key, const Tensor& h_star);

// o = softmax(M s + b_cls), ordered as DdiLabel.
Var classify(Graph& graph, Var s, const ClassifierParams& params);

}  // namespace ddi
