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

#include "ddi/corpus/blinding.hpp"

#include <algorithm>
#include <iterator>

#include "ddi/corpus/text.hpp"

namespace ddi {

PairKey make_pair_key(std::string_view drug1_surface, std::string_view drug2_surface) {
  return PairKey{case_fold(collapse_whitespace(drug1_surface)), case_fold(collapse_whitespace(drug2_surface))};
}

namespace {

// Ids of entities whose spans intersect another entity's span.
std::vector<std::string> overlapping_entities(const std::vector<const Entity*>& sorted) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    for (std::size_t j = i + 1; j < sorted.size() && sorted[j]->char_start <= sorted[i]->char_end; ++j) {
      for (const auto* e : {sorted[i], sorted[j]}) {
        if (std::find(ids.begin(), ids.end(), e->id) == ids.end()) ids.push_back(e->id);
      }
    }
  }
  return ids;
}

}  // namespace

BlindingResult blind_instances(const RawSentence& sentence) {
  BlindingResult result;

  std::vector<const Entity*> sorted;
  sorted.reserve(sentence.entities.size());
  for (const auto& e : sentence.entities) sorted.push_back(&e);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Entity* a, const Entity* b) { return a->char_start < b->char_start; });

  auto overlaps = overlapping_entities(sorted);
  auto bounds = utf8_boundaries(sentence.text);
  std::string_view text(sentence.text);

  for (const auto& pair : sentence.pairs) {
    Source source{sentence.doc_id, sentence.sent_id, pair.id};
    if (!overlaps.empty()) {
      result.skipped.push_back({std::move(source), overlaps, "overlapping entity spans"});
      continue;
    }
    const Entity* first = sentence.find_entity(pair.e1);
    const Entity* second = sentence.find_entity(pair.e2);
    if (first == nullptr || second == nullptr) {
      result.skipped.push_back({std::move(source), {pair.e1, pair.e2}, "dangling entity reference"});
      continue;
    }
    if (second->char_start < first->char_start) std::swap(first, second);

    BlindedInstance inst;
    std::size_t cursor = 0;  // code point index
    for (const Entity* e : sorted) {
      auto piece = tokenize(text.substr(bounds[cursor], bounds[e->char_start] - bounds[cursor]));
      std::move(piece.begin(), piece.end(), std::back_inserter(inst.tokens));
      if (e == first) {
        inst.u = inst.tokens.size();
        inst.tokens.emplace_back(kDrug1Token);
      } else if (e == second) {
        inst.v = inst.tokens.size();
        inst.tokens.emplace_back(kDrug2Token);
      } else {
        inst.tokens.emplace_back(kDrug0Token);
      }
      cursor = e->char_end + 1;
    }
    auto tail = tokenize(text.substr(bounds[cursor]));
    std::move(tail.begin(), tail.end(), std::back_inserter(inst.tokens));

    inst.key = make_pair_key(first->surface, second->surface);
    inst.label = pair.label;
    inst.source = std::move(source);
    result.instances.push_back(std::move(inst));
  }
  return result;
}

BlindingResult blind_corpus(std::span<const RawSentence> sentences) {
  BlindingResult all;
  for (const auto& s : sentences) {
    auto r = blind_instances(s);
    std::move(r.instances.begin(), r.instances.end(), std::back_inserter(all.instances));
    std::move(r.skipped.begin(), r.skipped.end(), std::back_inserter(all.skipped));
  }
  return all;
}

}  // namespace ddi
