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

#include "ddi/training/split.hpp"

#include <cstdint>

namespace ddi {

bool is_heldout_document(std::string_view doc_id) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : doc_id) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h % 10 == 0;
}

Split split_heldout(std::vector<BlindedInstance> instances) {
  Split split;
  for (auto& inst : instances) {
    (is_heldout_document(inst.source.doc_id) ? split.heldout : split.training).push_back(std::move(inst));
  }
  if (split.training.empty()) {
    split.training = std::move(split.heldout);
    split.heldout.clear();
  }
  return split;
}

}  // namespace ddi
