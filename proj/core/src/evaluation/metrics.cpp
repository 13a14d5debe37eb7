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

#include "ddi/evaluation/metrics.hpp"

#include <cstdio>
#include <sstream>

#include "ddi/errors.hpp"

namespace ddi {

std::uint64_t ConfusionMatrix::gold_total(DdiLabel gold) const {
  std::uint64_t n = 0;
  for (auto c : counts_[label_index(gold)]) n += c;
  return n;
}

std::uint64_t ConfusionMatrix::predicted_total(DdiLabel predicted) const {
  std::uint64_t n = 0;
  for (const auto& row : counts_) n += row[label_index(predicted)];
  return n;
}

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t n = 0;
  for (const auto& row : counts_) {
    for (auto c : row) n += c;
  }
  return n;
}

ConfusionMatrix confusion(std::span<const DdiLabel> golds, std::span<const DdiLabel> predictions) {
  if (golds.size() != predictions.size()) {
    throw LengthMismatch("confusion: " + std::to_string(golds.size()) + " gold labels vs " +
                         std::to_string(predictions.size()) + " predictions");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < golds.size(); ++i) cm.add(golds[i], predictions[i]);
  return cm;
}

double harmonic_f1(double precision, double recall) {
  const double denom = precision + recall;
  return denom > 0.0 ? 2.0 * precision * recall / denom : 0.0;
}

MetricsReport metrics(const ConfusionMatrix& cm) {
  MetricsReport r;
  double p_sum = 0.0;
  double r_sum = 0.0;
  for (DdiLabel c : kAllLabels) {
    const auto k = label_index(c);
    const auto tp = static_cast<double>(cm.at(c, c));
    const auto predicted = cm.predicted_total(c);
    const auto gold = cm.gold_total(c);
    r.precision[k] = predicted ? tp / static_cast<double>(predicted) : 0.0;
    r.recall[k] = gold ? tp / static_cast<double>(gold) : 0.0;
    p_sum += r.precision[k];
    r_sum += r.recall[k];
  }
  r.macro_precision = p_sum / static_cast<double>(kNumLabels);
  r.macro_recall = r_sum / static_cast<double>(kNumLabels);
  r.f1 = harmonic_f1(r.macro_precision, r.macro_recall);
  return r;
}

MicroReport positive_micro(const ConfusionMatrix& cm) {
  std::uint64_t tp = 0, predicted = 0, gold = 0;
  for (DdiLabel c : kAllLabels) {
    if (c == DdiLabel::False) continue;
    tp += cm.at(c, c);
    predicted += cm.predicted_total(c);
    gold += cm.gold_total(c);
  }
  MicroReport m;
  m.precision = predicted ? static_cast<double>(tp) / static_cast<double>(predicted) : 0.0;
  m.recall = gold ? static_cast<double>(tp) / static_cast<double>(gold) : 0.0;
  m.f1 = harmonic_f1(m.precision, m.recall);
  return m;
}

namespace {

std::string fixed4(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

std::string full(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void write_metrics_tsv(std::ostream& out, const MetricsReport& report, const MicroReport* micro) {
  out << "scope\tprecision\trecall\tf1\n";
  for (DdiLabel c : kAllLabels) {
    const auto k = label_index(c);
    out << label_name(c) << '\t' << full(report.precision[k]) << '\t' << full(report.recall[k]) << '\t'
        << full(harmonic_f1(report.precision[k], report.recall[k])) << '\n';
  }
  out << "macro\t" << full(report.macro_precision) << '\t' << full(report.macro_recall) << '\t' << full(report.f1)
      << '\n';
  if (micro != nullptr) {
    out << "positive_micro\t" << full(micro->precision) << '\t' << full(micro->recall) << '\t' << full(micro->f1)
        << '\n';
  }
}

void write_confusion_tsv(std::ostream& out, const ConfusionMatrix& cm) {
  out << "gold\\predicted";
  for (DdiLabel c : kAllLabels) out << '\t' << label_name(c);
  out << '\n';
  for (DdiLabel g : kAllLabels) {
    out << label_name(g);
    for (DdiLabel p : kAllLabels) out << '\t' << cm.at(g, p);
    out << '\n';
  }
}

std::string format_report(const MetricsReport& report, const ConfusionMatrix& cm, const MicroReport* micro) {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "%-12s %10s %10s %10s %8s\n", "class", "precision", "recall", "f1", "gold");
  os << line;
  for (DdiLabel c : kAllLabels) {
    const auto k = label_index(c);
    std::snprintf(line, sizeof line, "%-12s %10s %10s %10s %8llu\n", std::string(label_name(c)).c_str(),
                  fixed4(report.precision[k]).c_str(), fixed4(report.recall[k]).c_str(),
                  fixed4(harmonic_f1(report.precision[k], report.recall[k])).c_str(),
                  static_cast<unsigned long long>(cm.gold_total(c)));
    os << line;
  }
  std::snprintf(line, sizeof line, "%-12s %10s %10s %10s %8llu\n", "macro", fixed4(report.macro_precision).c_str(),
                fixed4(report.macro_recall).c_str(), fixed4(report.f1).c_str(),
                static_cast<unsigned long long>(cm.total()));
  os << line;
  if (micro != nullptr) {
    std::snprintf(line, sizeof line, "%-12s %10s %10s %10s\n", "pos. micro", fixed4(micro->precision).c_str(),
                  fixed4(micro->recall).c_str(), fixed4(micro->f1).c_str());
    os << line;
  }
  os << "\nconfusion (rows gold, columns predicted)\n";
  std::snprintf(line, sizeof line, "%-12s", "");
  os << line;
  for (DdiLabel p : kAllLabels) {
    std::snprintf(line, sizeof line, " %10s", std::string(label_name(p)).c_str());
    os << line;
  }
  os << '\n';
  for (DdiLabel g : kAllLabels) {
    std::snprintf(line, sizeof line, "%-12s", std::string(label_name(g)).c_str());
    os << line;
    for (DdiLabel p : kAllLabels) {
      std::snprintf(line, sizeof line, " %10llu", static_cast<unsigned long long>(cm.at(g, p)));
      os << line;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace ddi
