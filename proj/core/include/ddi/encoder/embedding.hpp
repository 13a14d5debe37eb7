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
#include <filesystem>
#include <istream>
#include <random>
#include <string>

#include "ddi/corpus/instance.hpp"
#include "ddi/corpus/vocabulary.hpp"
#include "ddi/numerics/graph.hpp"

namespace ddi {

// Word table [|V| x d_we] and position table [2*clip+2 x d_pe]. Position rows cover the
// clipped relative distances -clip..clip; the final row is reserved for PAD. The PAD
// word row is zero and is never looked up, so it stays zero.
struct EmbeddingTables {
  Tensor words;
  Tensor positions;
  std::size_t t_max = kDefaultTMax;
  std::size_t clip = kDefaultTMax - 1;

  std::size_t word_dim() const { return words.cols(); }
  std::size_t position_dim() const { return positions.cols(); }
  // d = d_we + 2 d_pe
  std::size_t dim() const { return word_dim() + 2 * position_dim(); }

  std::size_t position_row(std::ptrdiff_t distance) const;
  std::size_t pad_position_row() const { return positions.rows() - 1; }

  // Dynamic mode trains both tables; static mode freezes them.
  void set_trainable(bool trainable);
  bool trainable() const { return words.requires_grad(); }
};

// Uniform(-0.05, 0.05) initialization with zero PAD rows.
EmbeddingTables make_embedding_tables(std::size_t vocab_size, std::size_t d_we, std::size_t d_pe,
                                      std::size_t t_max, std::size_t clip, std::mt19937_64& rng);

// Column i is (word(w_i), pos(i-u), pos(i-v)) for real positions and zero for padding.
// Output shape [d x t_max]. Requires u, v < t_max.
Var embed(Graph& graph, const Instance& instance, const EmbeddingTables& tables);

struct PretrainedStats {
  std::size_t loaded = 0;         // vocabulary rows overwritten from the file
  std::size_t skipped = 0;        // file tokens absent from the vocabulary
  std::size_t missing = 0;        // vocabulary tokens (excluding PAD) absent from the file
};

// Reads GloVe-style text vectors: a token followed by d_we floats per line. A leading
// word2vec "count dim" header line is tolerated. Throws FormatError on malformed lines.
PretrainedStats load_pretrained(std::istream& in, const std::string& name, const Vocabulary& vocab,
                                Tensor& words);
PretrainedStats load_pretrained(const std::filesystem::path& path, const Vocabulary& vocab, Tensor& words);

}  // namespace ddi
