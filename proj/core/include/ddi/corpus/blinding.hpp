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
#include <span>
#include <string>
#include <vector>

#include "ddi/corpus/corpus.hpp"
#include "ddi/corpus/label.hpp"
#include "ddi/corpus/pair_key.hpp"

namespace ddi {

// One gold pair of a sentence after drug blinding: the target drugs read "drug1" and
// "drug2" (in document order), every other drug reads "drug0".
struct BlindedInstance {
  std::vector<std::string> tokens;
  std::size_t u = 0;  // position of drug1
  std::size_t v = 0;  // position of drug2
  PairKey key;
  DdiLabel label = DdiLabel::False;
  Source source;
};

// A gold pair that could not be blinded, e.g. because entity spans overlap.
struct SkippedPair {
  Source source;
  std::vector<std::string> entity_ids;
  std::string reason;
};

struct BlindingResult {
  std::vector<BlindedInstance> instances;
  std::vector<SkippedPair> skipped;
};

BlindingResult blind_instances(const RawSentence& sentence);

BlindingResult blind_corpus(std::span<const RawSentence> sentences);

}  // namespace ddi
