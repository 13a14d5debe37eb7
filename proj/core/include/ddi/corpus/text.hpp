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
#include <string>
#include <string_view>
#include <vector>

namespace ddi {

inline constexpr std::string_view kDrug0Token = "drug0";
inline constexpr std::string_view kDrug1Token = "drug1";
inline constexpr std::string_view kDrug2Token = "drug2";

// Lowercases ASCII, splits on whitespace and detaches . , ; : ( ) / as their own tokens.
std::vector<std::string> tokenize(std::string_view text);

std::string case_fold(std::string_view text);

// Trims and collapses each whitespace run into one space.
std::string collapse_whitespace(std::string_view text);

// Number of UTF-8 code points. Invalid lead bytes count as one code point each.
std::size_t utf8_length(std::string_view text);

// Byte offset of every code point boundary; size is utf8_length(text) + 1.
std::vector<std::size_t> utf8_boundaries(std::string_view text);

std::string_view utf8_substr(std::string_view text, std::size_t cp_start, std::size_t cp_count);

}  // namespace ddi
