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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace ddi {

// The five DDI classes. The integer encoding is stable and used in files.
enum class DdiLabel : std::uint8_t { False = 0, Mechanism = 1, Effect = 2, Advise = 3, Int = 4 };

inline constexpr std::size_t kNumLabels = 5;

inline constexpr std::array<DdiLabel, kNumLabels> kAllLabels = {
    DdiLabel::False, DdiLabel::Mechanism, DdiLabel::Effect, DdiLabel::Advise, DdiLabel::Int};

constexpr std::size_t label_index(DdiLabel label) { return static_cast<std::size_t>(label); }

DdiLabel label_from_index(std::size_t index);

// "False", "Mechanism", ...
std::string_view label_name(DdiLabel label);

// Case-insensitive inverse of label_name. Also accepts the integer encoding "0".."4".
std::optional<DdiLabel> parse_label(std::string_view text);

// Maps the corpus attributes ddi ∈ {true,false} and type to a label.
std::optional<DdiLabel> label_from_corpus(std::string_view ddi, std::string_view type);

}  // namespace ddi
