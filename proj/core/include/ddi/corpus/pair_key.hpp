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

#include <compare>
#include <string>
#include <string_view>

namespace ddi {

// Where an instance came from in the corpus.
struct Source {
  std::string doc_id;
  std::string sent_id;
  std::string pair_id;

  auto operator<=>(const Source&) const = default;
};

// Identity of a drug pair in (drug1, drug2) role order. Names are case-folded and
// whitespace-collapsed; the order is not canonicalized.
struct PairKey {
  std::string drug1;
  std::string drug2;

  auto operator<=>(const PairKey&) const = default;
};

PairKey make_pair_key(std::string_view drug1_surface, std::string_view drug2_surface);

}  // namespace ddi
