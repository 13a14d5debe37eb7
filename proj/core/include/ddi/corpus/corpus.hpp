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
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ddi/corpus/label.hpp"

namespace ddi {

// A drug mention. Offsets are inclusive code-point indices into the sentence text.
// Discontinuous mentions keep only their first span.
struct Entity {
  std::string id;
  std::size_t char_start = 0;
  std::size_t char_end = 0;
  std::string surface;
  std::string drug_type;

  bool operator==(const Entity&) const = default;
};

struct GoldPair {
  std::string id;
  std::string e1;
  std::string e2;
  DdiLabel label = DdiLabel::False;

  bool operator==(const GoldPair&) const = default;
};

struct RawSentence {
  std::string doc_id;
  std::string sent_id;
  std::string text;
  std::vector<Entity> entities;
  std::vector<GoldPair> pairs;

  const Entity* find_entity(std::string_view id) const;

  bool operator==(const RawSentence&) const = default;
};

// Parses one corpus file held in memory. `file_name` is only used in error messages.
std::vector<RawSentence> parse_corpus_xml(std::string_view xml, const std::string& file_name);

// Parses a single XML file, or every *.xml file under a directory (recursively, in path order).
std::vector<RawSentence> parse_corpus(const std::filesystem::path& path);

}  // namespace ddi
