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

#include "ddi/encoder/embedding.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "ddi/errors.hpp"
#include "ddi/numerics/ops.hpp"

namespace ddi {

std::size_t EmbeddingTables::position_row(std::ptrdiff_t distance) const {
  const auto c = static_cast<std::ptrdiff_t>(clip);
  return static_cast<std::size_t>(std::clamp(distance, -c, c) + c);
}

void EmbeddingTables::set_trainable(bool trainable) {
  words.set_requires_grad(trainable);
  positions.set_requires_grad(trainable);
}

EmbeddingTables make_embedding_tables(std::size_t vocab_size, std::size_t d_we, std::size_t d_pe,
                                      std::size_t t_max, std::size_t clip, std::mt19937_64& rng) {
  if (vocab_size < Vocabulary::kNumReserved || d_we == 0 || d_pe == 0 || t_max == 0) {
    throw ShapeMismatch("embedding tables need a vocabulary and positive dimensions");
  }
  EmbeddingTables t;
  t.t_max = t_max;
  t.clip = clip;
  t.words = Tensor(Shape{vocab_size, d_we});
  t.positions = Tensor(Shape{2 * clip + 2, d_pe});
  fill_uniform(t.words, -0.05, 0.05, rng);
  fill_uniform(t.positions, -0.05, 0.05, rng);
  for (std::size_t j = 0; j < d_we; ++j) t.words.at(Vocabulary::kPad, j) = 0.0;
  for (std::size_t j = 0; j < d_pe; ++j) t.positions.at(t.pad_position_row(), j) = 0.0;
  return t;
}

Var embed(Graph& graph, const Instance& instance, const EmbeddingTables& tables) {
  const std::size_t t_max = tables.t_max;
  if (instance.u >= t_max || instance.v >= t_max || instance.tokens.size() > t_max) {
    throw ShapeMismatch("instance does not fit t_max=" + std::to_string(t_max));
  }
  const Var pad = graph.constant(Tensor(Shape{tables.dim()}));
  std::vector<Var> columns;
  columns.reserve(t_max);
  const auto u = static_cast<std::ptrdiff_t>(instance.u);
  const auto v = static_cast<std::ptrdiff_t>(instance.v);
  for (std::size_t i = 0; i < t_max; ++i) {
    if (i >= instance.tokens.size() || instance.tokens[i] == Vocabulary::kPad) {
      columns.push_back(pad);
      continue;
    }
    const auto pos = static_cast<std::ptrdiff_t>(i);
    const Var parts[] = {graph.lookup_row(tables.words, instance.tokens[i]),
                         graph.lookup_row(tables.positions, tables.position_row(pos - u)),
                         graph.lookup_row(tables.positions, tables.position_row(pos - v))};
    columns.push_back(concat(parts));
  }
  return stack_columns(columns);
}

PretrainedStats load_pretrained(std::istream& in, const std::string& name, const Vocabulary& vocab,
                                Tensor& words) {
  const std::size_t dim = words.cols();
  PretrainedStats stats;
  std::vector<bool> seen(vocab.size(), false);
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string_view> fields;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    fields.clear();
    std::string_view rest(line);
    while (!rest.empty()) {
      auto start = rest.find_first_not_of(" \t");
      if (start == std::string_view::npos) break;
      rest.remove_prefix(start);
      auto end = rest.find_first_of(" \t");
      fields.push_back(rest.substr(0, end));
      rest.remove_prefix(end == std::string_view::npos ? rest.size() : end);
    }
    if (fields.empty()) continue;
    if (line_no == 1 && fields.size() == 2) continue;  // word2vec header
    if (fields.size() != dim + 1) {
      throw FormatError(name, line_no,
                        "expected a token and " + std::to_string(dim) + " values, got " +
                            std::to_string(fields.size()) + " fields");
    }
    const std::string token(fields[0]);
    if (!vocab.contains(token)) {
      ++stats.skipped;
      continue;
    }
    const TokenId id = vocab.index(token);
    if (id == Vocabulary::kPad) continue;
    for (std::size_t j = 0; j < dim; ++j) {
      double value = 0.0;
      auto f = fields[j + 1];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        throw FormatError(name, line_no, "bad number '" + std::string(f) + "'");
      }
      words.at(id, j) = value;
    }
    if (!seen[id]) ++stats.loaded;
    seen[id] = true;
  }
  for (std::size_t id = 0; id < vocab.size(); ++id) {
    if (id != Vocabulary::kPad && !seen[id]) ++stats.missing;
  }
  return stats;
}

PretrainedStats load_pretrained(const std::filesystem::path& path, const Vocabulary& vocab, Tensor& words) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open embeddings " + path.string());
  return load_pretrained(in, path.string(), vocab, words);
}

}  // namespace ddi
