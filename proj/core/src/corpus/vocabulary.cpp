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

#include "ddi/corpus/vocabulary.hpp"

#include <algorithm>
#include <map>

#include "ddi/corpus/text.hpp"
#include "ddi/errors.hpp"

namespace ddi {

namespace {
constexpr std::string_view kPadToken = "<pad>";
constexpr std::string_view kUnkToken = "<unk>";
}  // namespace

Vocabulary::Vocabulary() {
  for (auto t : {kPadToken, kUnkToken, kDrug0Token, kDrug1Token, kDrug2Token}) add(std::string(t));
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens) {
  Vocabulary vocab;
  if (tokens.size() < kNumReserved) throw Error("vocabulary is missing reserved tokens");
  for (std::size_t i = 0; i < kNumReserved; ++i) {
    if (tokens[i] != vocab.tokens_[i]) throw Error("vocabulary reserved token mismatch at " + std::to_string(i));
  }
  for (std::size_t i = kNumReserved; i < tokens.size(); ++i) {
    if (vocab.contains(tokens[i])) throw Error("duplicate vocabulary token '" + tokens[i] + "'");
    vocab.add(std::move(tokens[i]));
  }
  return vocab;
}

TokenId Vocabulary::add(std::string token) {
  auto [it, inserted] = index_.emplace(token, static_cast<TokenId>(tokens_.size()));
  if (inserted) tokens_.push_back(std::move(token));
  return it->second;
}

TokenId Vocabulary::index(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnk : it->second;
}

bool Vocabulary::contains(std::string_view token) const { return index_.count(std::string(token)) != 0; }

const std::string& Vocabulary::token(TokenId id) const {
  if (id >= tokens_.size()) throw IndexOutOfVocab("token id " + std::to_string(id) + " out of vocabulary");
  return tokens_[id];
}

std::uint64_t Vocabulary::hash() const {
  std::uint64_t h = 14695981039346656037ULL;
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 1099511628211ULL;
  };
  for (const auto& t : tokens_) {
    for (char c : t) mix(static_cast<unsigned char>(c));
    mix('\n');
  }
  return h;
}

Vocabulary build_vocabulary(std::span<const BlindedInstance> training, std::size_t min_count) {
  if (training.empty()) throw EmptyCorpus("cannot build a vocabulary from an empty training set");
  std::map<std::string, std::size_t> counts;
  for (const auto& inst : training) {
    for (const auto& tok : inst.tokens) ++counts[tok];
  }
  std::vector<std::pair<std::string, std::size_t>> ordered(counts.begin(), counts.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  Vocabulary vocab;
  for (auto& [tok, count] : ordered) {
    if (count >= std::max<std::size_t>(min_count, 1)) vocab.add(tok);
  }
  return vocab;
}

}  // namespace ddi
