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
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "ddi/corpus/blinding.hpp"
#include "ddi/corpus/vocabulary.hpp"

namespace ddi {

inline constexpr std::size_t kDefaultTMax = 100;

// A blinded sentence encoded against a vocabulary. `tokens` holds only real positions;
// padding to t_max happens when the sentence is embedded.
struct Instance {
  std::vector<TokenId> tokens;
  std::size_t u = 0;
  std::size_t v = 0;
  PairKey key;
  DdiLabel label = DdiLabel::False;
  Source source;
  std::size_t ordinal = 0;  // position in the corpus before rejection
};

// An instance dropped by encode_instance. Scored as a "False" prediction.
struct RejectedInstance {
  Source source;
  PairKey key;
  DdiLabel label = DdiLabel::False;
  std::size_t ordinal = 0;
  std::string reason;
};

struct EncodedCorpus {
  std::vector<Instance> instances;
  std::vector<RejectedInstance> rejected;

  std::size_t total() const { return instances.size() + rejected.size(); }
};

// Maps tokens to ids (unknown -> UNK) and tail-truncates to t_max. Throws DrugTruncated
// when truncation would remove position u or v.
Instance encode_instance(std::span<const std::string> tokens, std::size_t u, std::size_t v,
                         const Vocabulary& vocab, std::size_t t_max);

Instance encode_instance(const BlindedInstance& blinded, const Vocabulary& vocab, std::size_t t_max);

// Encodes every instance; truncated ones land in `rejected`. Ordinals follow input order.
EncodedCorpus encode_corpus(std::span<const BlindedInstance> blinded, const Vocabulary& vocab,
                            std::size_t t_max);

using PairGroups = std::map<PairKey, std::vector<const Instance*>>;

PairGroups group_by_pair(std::span<const Instance> instances);

// Debug dump: doc_id, sent_id, pair_id, label, u, v, space-joined tokens; tab-separated.
void write_instance_dump(std::ostream& out, std::span<const BlindedInstance> instances);

}  // namespace ddi
