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

#include "ddi/corpus/label.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "ddi/errors.hpp"

namespace ddi {
namespace {

constexpr std::array<std::string_view, kNumLabels> kNames = {"False", "Mechanism", "Effect", "Advise",
                                                             "Int"};

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

}  // namespace

DdiLabel label_from_index(std::size_t index) {
  if (index >= kNumLabels) throw Error("label index out of range: " + std::to_string(index));
  return static_cast<DdiLabel>(index);
}

std::string_view label_name(DdiLabel label) { return kNames.at(label_index(label)); }

std::optional<DdiLabel> parse_label(std::string_view text) {
  for (std::size_t i = 0; i < kNumLabels; ++i) {
    if (iequals(text, kNames[i])) return static_cast<DdiLabel>(i);
  }
  if (text.size() == 1 && text[0] >= '0' && text[0] < static_cast<char>('0' + kNumLabels)) {
    return static_cast<DdiLabel>(text[0] - '0');
  }
  return std::nullopt;
}

std::optional<DdiLabel> label_from_corpus(std::string_view ddi, std::string_view type) {
  if (iequals(ddi, "false")) return DdiLabel::False;
  if (!iequals(ddi, "true")) return std::nullopt;
  if (iequals(type, "mechanism")) return DdiLabel::Mechanism;
  if (iequals(type, "effect")) return DdiLabel::Effect;
  if (iequals(type, "advise")) return DdiLabel::Advise;
  if (iequals(type, "int")) return DdiLabel::Int;
  return std::nullopt;
}

}  // namespace ddi
