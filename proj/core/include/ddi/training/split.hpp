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

#include <string_view>
#include <utility>
#include <vector>

#include "ddi/corpus/blinding.hpp"

namespace ddi {

// True for roughly one document in ten, chosen by a hash of the document id.
bool is_heldout_document(std::string_view doc_id);

struct Split {
  std::vector<BlindedInstance> training;
  std::vector<BlindedInstance> heldout;
};

// Moves held-out documents aside. Everything stays in training if the split would
// leave it empty.
Split split_heldout(std::vector<BlindedInstance> instances);

}  // namespace ddi
