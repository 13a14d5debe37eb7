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
#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "ddi/corpus/label.hpp"
#include "ddi/corpus/pair_key.hpp"

namespace ddi {

struct Prediction {
  Source source;
  DdiLabel gold = DdiLabel::False;
  DdiLabel predicted = DdiLabel::False;
  std::array<double, kNumLabels> probabilities{};
  std::vector<double> h_star;
  std::vector<double> s;
  // Dropped at encoding time (drug beyond t_max); scored as False with no features.
  bool rejected = false;
};

// Gold and predicted labels read back from a predictions file.
struct ScoredLabels {
  std::vector<DdiLabel> gold;
  std::vector<DdiLabel> predicted;
};

// 17 significant digits; strtod recovers the value exactly.
std::string format_double(double value);

// Header plus one row per prediction:
// doc_id sent_id pair_id gold predicted p_False p_Mechanism p_Effect p_Advise p_Int
void write_predictions_tsv(std::ostream& out, std::span<const Prediction> predictions);

// Reads gold/predicted columns (4th and 5th) of a predictions file. The header line is
// optional. Throws FormatError with the 1-based line number on a short row or an
// unknown label.
ScoredLabels read_predictions_tsv(std::istream& in, const std::string& name);
ScoredLabels read_predictions_tsv(const std::filesystem::path& path);

enum class FeatureKind { HStar, S };

// doc_id sent_id pair_id gold predicted v1..vd. Rejected predictions carry no
// features and are left out. An empty input writes the header only.
void export_features(std::ostream& out, std::span<const Prediction> predictions, FeatureKind kind);

// Writes features_hstar.tsv and features_s.tsv under `dir`.
void export_feature_files(const std::filesystem::path& dir, std::span<const Prediction> predictions);

}  // namespace ddi
