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

#include "ddi/corpus/text.hpp"

#include <algorithm>
#include <cctype>

namespace ddi {
namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_detached_punct(char c) {
  switch (c) {
    case '.':
    case ',':
    case ';':
    case ':':
    case '(':
    case ')':
    case '/':
      return true;
    default:
      return false;
  }
}

std::size_t utf8_width(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 1;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (char c : text) {
    if (is_space(c)) {
      flush();
    } else if (is_detached_punct(c)) {
      flush();
      tokens.emplace_back(1, c);
    } else {
      current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  flush();
  return tokens;
}

std::string case_fold(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string collapse_whitespace(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (char c : text) {
    if (is_space(c)) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.push_back(c);
    }
  }
  return out;
}

std::vector<std::size_t> utf8_boundaries(std::string_view text) {
  std::vector<std::size_t> bounds;
  bounds.reserve(text.size() + 1);
  std::size_t i = 0;
  while (i < text.size()) {
    bounds.push_back(i);
    i = std::min(text.size(), i + utf8_width(static_cast<unsigned char>(text[i])));
  }
  bounds.push_back(text.size());
  return bounds;
}

std::size_t utf8_length(std::string_view text) { return utf8_boundaries(text).size() - 1; }

std::string_view utf8_substr(std::string_view text, std::size_t cp_start, std::size_t cp_count) {
  auto bounds = utf8_boundaries(text);
  std::size_t n = bounds.size() - 1;
  std::size_t first = std::min(cp_start, n);
  std::size_t last = std::min(cp_start + cp_count, n);
  return text.substr(bounds[first], bounds[last] - bounds[first]);
}

}  // namespace ddi
