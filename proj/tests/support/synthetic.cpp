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

#include "synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include "ddi/corpus/blinding.hpp"
#include "ddi/errors.hpp"

namespace ddi::fixtures {
namespace {

const char* const kTemplates[kNumLabels][5] = {
    {"{A} and {B} were both listed in the formulary .", "patients received {A} ; others received {B} .",
     "{A} was compared with {B} in a separate cohort .", "neither {A} nor {B} was studied here .",
     "the trial enrolled users of {A} or {B} ."},
    {"{A} increases plasma levels of {B} .", "{A} inhibits the metabolism of {B} .",
     "{A} reduces the clearance of {B} .", "{A} raises serum concentrations of {B} .",
     "{A} decreases absorption of {B} ."},
    {"{A} potentiates the sedative effect of {B} .", "{A} enhances hypotensive effects of {B} .",
     "{A} may increase toxicity when given with {B} .", "{A} augments bleeding caused by {B} .",
     "{A} intensifies the action of {B} ."},
    {"{A} should not be combined with {B} .", "avoid {A} in patients taking {B} .",
     "caution is advised when {A} is used with {B} .", "{A} is contraindicated with {B} .",
     "monitor closely if {A} is prescribed with {B} ."},
    {"{A} interacts with {B} .", "an interaction between {A} and {B} was reported .",
     "{A} has an interaction with {B} .", "{A} may interact with {B} .",
     "interaction of {A} and {B} is described ."},
};

const char* const kDrugs[] = {"aspirin",   "warfarin", "digoxin",    "lithium",  "phenytoin",
                              "ketoconazole", "cimetidine", "rifampin", "theophylline", "verapamil",
                              "iron",      "cobalt"};

const char* const kFiller[] = {"the", "of",   "was",  "in",      "patients", "dose",  "with",
                               "and", "may",  "risk", "therapy", "reported", "use",   "levels",
                               "a",   "study", "effect", "plasma", "when", "clinical"};

struct Builder {
  RawSentence s;
  void text(const std::string& t) { s.text += t; }
  void entity(const std::string& name) {
    Entity e;
    e.id = s.sent_id + ".e" + std::to_string(s.entities.size());
    e.char_start = s.text.size();
    e.char_end = s.text.size() + name.size() - 1;
    e.surface = name;
    e.drug_type = "drug";
    s.entities.push_back(e);
    s.text += name;
  }
};

std::string escape(const std::string& in) {
  std::string out;
  for (char c : in) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::vector<RawSentence> synthetic_sentences(std::size_t per_class) {
  std::vector<RawSentence> out;
  const std::size_t n_drugs = std::size(kDrugs);
  for (std::size_t c = 0; c < kNumLabels; ++c) {
    for (std::size_t k = 0; k < per_class; ++k) {
      Builder b;
      b.s.doc_id = "Syn.d" + std::to_string(c * per_class + k);
      b.s.sent_id = b.s.doc_id + ".s0";
      const std::string tmpl = kTemplates[c][k % 5];
      const std::string a = kDrugs[(c * 7 + k) % n_drugs];
      const std::string bname = kDrugs[(c * 7 + k * 3 + 5) % n_drugs] == a ? kDrugs[(c + k + 1) % n_drugs]
                                                                            : kDrugs[(c * 7 + k * 3 + 5) % n_drugs];
      const std::size_t pa = tmpl.find("{A}");
      const std::size_t pb = tmpl.find("{B}");
      const bool a_first = pa < pb;
      const std::size_t first = std::min(pa, pb), second = std::max(pa, pb);
      b.text(tmpl.substr(0, first));
      b.entity(a_first ? a : bname);
      b.text(tmpl.substr(first + 3, second - first - 3));
      b.entity(a_first ? bname : a);
      b.text(tmpl.substr(second + 3));
      b.s.pairs.push_back({b.s.sent_id + ".p0", b.s.entities[0].id, b.s.entities[1].id, label_from_index(c)});
      out.push_back(std::move(b.s));
    }
  }
  return out;
}

std::string to_xml(std::span<const RawSentence> sentences) {
  std::string xml = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<corpus>\n";
  std::string open_doc;
  for (const auto& s : sentences) {
    if (s.doc_id != open_doc) {
      if (!open_doc.empty()) xml += "</document>\n";
      xml += "<document id=\"" + escape(s.doc_id) + "\">\n";
      open_doc = s.doc_id;
    }
    xml += "  <sentence id=\"" + escape(s.sent_id) + "\" text=\"" + escape(s.text) + "\">\n";
    for (const auto& e : s.entities) {
      xml += "    <entity id=\"" + escape(e.id) + "\" charOffset=\"" + std::to_string(e.char_start) + "-" +
             std::to_string(e.char_end) + "\" type=\"" + escape(e.drug_type) + "\" text=\"" + escape(e.surface) +
             "\"/>\n";
    }
    for (const auto& p : s.pairs) {
      xml += "    <pair id=\"" + escape(p.id) + "\" e1=\"" + escape(p.e1) + "\" e2=\"" + escape(p.e2) + "\" ddi=\"";
      if (p.label == DdiLabel::False) {
        xml += "false\"/>\n";
      } else {
        std::string type(label_name(p.label));
        std::transform(type.begin(), type.end(), type.begin(), [](unsigned char ch) { return std::tolower(ch); });
        xml += "true\" type=\"" + type + "\"/>\n";
      }
    }
    xml += "  </sentence>\n";
  }
  if (!open_doc.empty()) xml += "</document>\n";
  xml += "</corpus>\n";
  return xml;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << contents;
}

ToyData synthetic_corpus(std::size_t t_max, std::size_t per_class) {
  const auto sentences = synthetic_sentences(per_class);
  const auto blinded = blind_corpus(sentences);
  ToyData data;
  data.vocab = build_vocabulary(blinded.instances);
  data.corpus = encode_corpus(blinded.instances, data.vocab, t_max);
  return data;
}

RawSentence random_sentence(std::size_t n_entities, std::mt19937_64& rng) {
  static std::size_t counter = 0;
  Builder b;
  b.s.doc_id = "Rnd.d" + std::to_string(counter++);
  b.s.sent_id = b.s.doc_id + ".s0";
  std::uniform_int_distribution<std::size_t> filler(0, std::size(kFiller) - 1);
  std::uniform_int_distribution<std::size_t> drug(0, std::size(kDrugs) - 1);
  std::uniform_int_distribution<int> gap(0, 3);
  std::uniform_int_distribution<int> two_words(0, 4);
  for (std::size_t i = 0; i < n_entities; ++i) {
    for (int g = gap(rng); g > 0; --g) b.text(std::string(kFiller[filler(rng)]) + " ");
    std::string name = kDrugs[drug(rng)];
    if (two_words(rng) == 0) name += " " + std::string(kDrugs[drug(rng)]);
    b.entity(name);
    b.text(i + 1 < n_entities ? " " : "");
  }
  b.text(" .");
  std::uniform_int_distribution<std::size_t> label(0, kNumLabels - 1);
  for (std::size_t i = 0; i < n_entities; ++i) {
    for (std::size_t j = i + 1; j < n_entities; ++j) {
      b.s.pairs.push_back({b.s.sent_id + ".p" + std::to_string(b.s.pairs.size()), b.s.entities[i].id,
                           b.s.entities[j].id, label_from_index(label(rng))});
    }
  }
  return b.s;
}

ModelConfig tiny_config() {
  ModelConfig c;
  c.d_we = 4;
  c.d_pe = 2;
  c.d_h = 3;
  c.t_max = 5;
  return c;
}

GradCheck check_gradients(const std::function<double()>& f, std::span<const std::pair<std::string, Tensor*>> params,
                          std::span<const std::vector<double>> analytic, double step, double floor) {
  GradCheck result;
  for (std::size_t p = 0; p < params.size(); ++p) {
    Tensor& t = *params[p].second;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double saved = t[i];
      t[i] = saved + step;
      const double up = f();
      t[i] = saved - step;
      const double down = f();
      t[i] = saved;
      const double numeric = (up - down) / (2 * step);
      const double a = analytic[p][i];
      const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), floor});
      ++result.entries;
      if (rel > result.max_rel_error) {
        result.max_rel_error = rel;
        result.worst = params[p].first + "[" + std::to_string(i) + "] analytic " + std::to_string(a) + " numeric " +
                       std::to_string(numeric);
      }
    }
  }
  return result;
}

std::string temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("ddi_attn_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

GradCheck model_gradient_check(const ModelConfig& config, double lambda, std::uint64_t seed) {
  constexpr std::size_t kVocab = 12;
  std::mt19937_64 rng(seed);
  TrainConfig tc;
  tc.model = config;
  tc.lambda = lambda;
  ModelParams params = init_params(config, kVocab, rng);
  params.configure(config);

  const PairKey key{"iron", "cobalt"};
  std::vector<Instance> instances(3);
  std::uniform_int_distribution<TokenId> word(Vocabulary::kNumReserved, kVocab - 1);
  for (std::size_t k = 0; k < instances.size(); ++k) {
    auto& inst = instances[k];
    const std::size_t len = std::min<std::size_t>(config.t_max, 3 + k);
    inst.tokens.resize(len);
    for (auto& t : inst.tokens) t = word(rng);
    inst.tokens[len > 3 ? 1 : 0] = Vocabulary::kDrug0;
    inst.u = k % 2 == 0 ? 0 : len - 1;
    inst.v = k % 2 == 0 ? len - 1 : 0;
    inst.tokens[inst.u] = Vocabulary::kDrug1;
    inst.tokens[inst.v] = Vocabulary::kDrug2;
    inst.key = key;
    inst.label = label_from_index(k + 1);
  }
  RelevantStore store(kDefaultStoreCapacity, config.d_h);
  for (int i = 0; i < 2; ++i) {
    Tensor h(Shape{config.d_h});
    fill_uniform(h, -0.9, 0.9, rng);
    update_store(store, key, h);
  }
  std::vector<const Instance*> batch;
  for (const auto& inst : instances) batch.push_back(&inst);

  constexpr std::uint64_t kDropoutSeed = 5;
  params.zero_grad();
  evaluate_batch(params, tc, batch, store, kDropoutSeed, true);
  auto named = params.named();
  std::vector<std::pair<std::string, Tensor*>> checked;
  std::vector<std::vector<double>> analytic;
  for (auto& [name, t] : named) {
    if (!t->requires_grad()) continue;
    checked.emplace_back(name, t);
    analytic.emplace_back(t->grad().begin(), t->grad().end());
  }
  auto f = [&] { return evaluate_batch(params, tc, batch, store, kDropoutSeed, false).objective; };
  return check_gradients(f, checked, analytic);
}

ConfusionMatrix published_matrix() {
  return ConfusionMatrix(ConfusionMatrix::Counts{{{4490, 138, 49, 45, 15},
                                                  {68, 229, 2, 3, 0},
                                                  {101, 12, 230, 15, 2},
                                                  {49, 5, 0, 165, 2},
                                                  {13, 3, 37, 0, 43}}});
}

std::string published_predictions_tsv() {
  std::string out = "doc_id\tsent_id\tpair_id\tgold\tpredicted\tp_False\tp_Mechanism\tp_Effect\tp_Advise\tp_Int\n";
  const auto cm = published_matrix();
  std::size_t n = 0;
  for (auto g : kAllLabels) {
    for (auto p : kAllLabels) {
      for (std::uint64_t k = 0; k < cm.at(g, p); ++k, ++n) {
        const std::string id = "T.d" + std::to_string(n);
        out += id + "\t" + id + ".s0\t" + id + ".s0.p0\t" + std::string(label_name(g)) + "\t" +
               std::string(label_name(p)) + "\t0.2\t0.2\t0.2\t0.2\t0.2\n";
      }
    }
  }
  return out;
}

}  // namespace ddi::fixtures
