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
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ddi/corpus/blinding.hpp"

namespace ddi {

using TokenId = std::uint32_t;

// Token <-> index map. Indices 0..4 are reserved for PAD, UNK, DRUG0, DRUG1, DRUG2.
class Vocabulary {
 public:
  static constexpr TokenId kPad = 0;
  static constexpr TokenId kUnk = 1;
  static constexpr TokenId kDrug0 = 2;
  static constexpr TokenId kDrug1 = 3;
  static constexpr TokenId kDrug2 = 4;
  static constexpr std::size_t kNumReserved = 5;

  // Only the reserved entries.
  Vocabulary();

  // Rebuilds from a full index->token list, as stored in checkpoints. The first five
  // entries must be the reserved tokens.
  static Vocabulary from_tokens(std::vector<std::string> tokens);

  // Returns kUnk for tokens not in the vocabulary.
  TokenId index(std::string_view token) const;
  bool contains(std::string_view token) const;
  const std::string& token(TokenId id) const;
  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  // FNV-1a over the token list; identifies a vocabulary in checkpoints.
  std::uint64_t hash() const;

  TokenId add(std::string token);

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> index_;
};

// Every token seen at least `min_count` times gets an index, ordered by decreasing
// frequency then lexicographically. Throws EmptyCorpus on an empty input.
Vocabulary build_vocabulary(std::span<const BlindedInstance> training, std::size_t min_count = 1);

}  // namespace ddi
