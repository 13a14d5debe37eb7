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

#include <string>
#include <string_view>

#include "ddi/attention/sentence_attention.hpp"
#include "ddi/corpus/vocabulary.hpp"
#include "ddi/training/model.hpp"

namespace ddi {

struct Checkpoint {
  TrainConfig config;
  Vocabulary vocab;
  ModelParams params;
  RelevantStore store;
};

std::string encode_checkpoint(const TrainConfig& config, const Vocabulary& vocab, const ModelParams& params,
                              const RelevantStore& store);
void save_checkpoint(const std::string& path, const TrainConfig& config, const Vocabulary& vocab,
                     const ModelParams& params, const RelevantStore& store);

// Throws CheckpointError on malformed bytes and CheckpointShapeMismatch when the
// tensors disagree with the stored config or vocabulary.
Checkpoint decode_checkpoint(std::string_view bytes);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace ddi
