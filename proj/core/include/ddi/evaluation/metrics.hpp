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
#include <cstdint>
#include <ostream>
#include <span>
#include <string>

#include "ddi/corpus/label.hpp"

namespace ddi {

// Counts indexed [gold][predicted] in DdiLabel order.
class ConfusionMatrix {
 public:
  using Counts = std::array<std::array<std::uint64_t, kNumLabels>, kNumLabels>;

  ConfusionMatrix() = default;
  explicit ConfusionMatrix(const Counts& counts) : counts_(counts) {}

  void add(DdiLabel gold, DdiLabel predicted, std::uint64_t n = 1) {
    counts_[label_index(gold)][label_index(predicted)] += n;
  }
  std::uint64_t at(DdiLabel gold, DdiLabel predicted) const {
    return counts_[label_index(gold)][label_index(predicted)];
  }
  std::uint64_t gold_total(DdiLabel gold) const;
  std::uint64_t predicted_total(DdiLabel predicted) const;
  std::uint64_t total() const;
  const Counts& counts() const { return counts_; }

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  Counts counts_{};
};

// Throws LengthMismatch unless both lists have the same length.
ConfusionMatrix confusion(std::span<const DdiLabel> golds, std::span<const DdiLabel> predictions);

struct MetricsReport {
  std::array<double, kNumLabels> precision{};
  std::array<double, kNumLabels> recall{};
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double f1 = 0.0;
};

// Per-class P_c = tp/predicted, R_c = tp/gold (0 when the denominator is 0); P and R are
// unweighted means over all five classes including False; F1 = 2PR/(P+R) or 0.
MetricsReport metrics(const ConfusionMatrix& cm);

// Micro-averaged precision/recall/F1 over the four positive classes, for comparison
// with the shared-task convention.
struct MicroReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

MicroReport positive_micro(const ConfusionMatrix& cm);

double harmonic_f1(double precision, double recall);

void write_metrics_tsv(std::ostream& out, const MetricsReport& report, const MicroReport* micro = nullptr);
void write_confusion_tsv(std::ostream& out, const ConfusionMatrix& cm);
std::string format_report(const MetricsReport& report, const ConfusionMatrix& cm, const MicroReport* micro = nullptr);

}  // namespace ddi
