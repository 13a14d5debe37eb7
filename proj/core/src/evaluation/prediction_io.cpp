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

#include "ddi/evaluation/prediction.hpp"

#include <charconv>
#include <fstream>

#include "ddi/errors.hpp"

namespace ddi {
namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

void write_source(std::ostream& out, const Prediction& p) {
  out << p.source.doc_id << '\t' << p.source.sent_id << '\t' << p.source.pair_id << '\t' << label_name(p.gold)
      << '\t' << label_name(p.predicted);
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  if (ec != std::errc()) throw Error("cannot format double");
  return std::string(buf, ptr);
}

void write_predictions_tsv(std::ostream& out, std::span<const Prediction> predictions) {
  out << "doc_id\tsent_id\tpair_id\tgold\tpredicted";
  for (DdiLabel c : kAllLabels) out << "\tp_" << label_name(c);
  out << '\n';
  for (const auto& p : predictions) {
    write_source(out, p);
    for (double x : p.probabilities) out << '\t' << format_double(x);
    out << '\n';
  }
}

ScoredLabels read_predictions_tsv(std::istream& in, const std::string& name) {
  ScoredLabels scored;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_tabs(line);
    if (line_no == 1 && fields[0] == "doc_id") continue;
    if (fields.size() < 5) {
      throw FormatError(name, line_no, "expected at least 5 tab-separated fields, got " + std::to_string(fields.size()));
    }
    auto gold = parse_label(fields[3]);
    if (!gold) throw FormatError(name, line_no, "unknown gold label '" + std::string(fields[3]) + "'");
    auto predicted = parse_label(fields[4]);
    if (!predicted) throw FormatError(name, line_no, "unknown predicted label '" + std::string(fields[4]) + "'");
    scored.gold.push_back(*gold);
    scored.predicted.push_back(*predicted);
  }
  if (in.bad()) throw IoError("error reading " + name);
  return scored;
}

ScoredLabels read_predictions_tsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open predictions " + path.string());
  return read_predictions_tsv(in, path.string());
}

void export_features(std::ostream& out, std::span<const Prediction> predictions, FeatureKind kind) {
  auto features = [kind](const Prediction& p) -> const std::vector<double>& {
    return kind == FeatureKind::HStar ? p.h_star : p.s;
  };
  std::size_t dim = 0;
  for (const auto& p : predictions) {
    if (!p.rejected) {
      dim = features(p).size();
      break;
    }
  }
  out << "doc_id\tsent_id\tpair_id\tgold\tpredicted";
  for (std::size_t j = 1; j <= dim; ++j) out << "\tv" << j;
  out << '\n';
  for (const auto& p : predictions) {
    if (p.rejected) continue;
    const auto& v = features(p);
    if (v.size() != dim) throw ShapeMismatch("feature vectors of differing length");
    write_source(out, p);
    for (double x : v) out << '\t' << format_double(x);
    out << '\n';
  }
}

void export_feature_files(const std::filesystem::path& dir, std::span<const Prediction> predictions) {
  for (auto [file, kind] : {std::pair{"features_hstar.tsv", FeatureKind::HStar}, std::pair{"features_s.tsv", FeatureKind::S}}) {
    std::ofstream out(dir / file);
    if (!out) throw IoError("cannot write " + (dir / file).string());
    export_features(out, predictions, kind);
    if (!out) throw IoError("error writing " + (dir / file).string());
  }
}

}  // namespace ddi
