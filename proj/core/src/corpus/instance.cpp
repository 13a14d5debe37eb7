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

#include "ddi/corpus/instance.hpp"

#include "ddi/errors.hpp"

namespace ddi {

Instance encode_instance(std::span<const std::string> tokens, std::size_t u, std::size_t v,
                         const Vocabulary& vocab, std::size_t t_max) {
  if (u >= tokens.size() || v >= tokens.size() || u == v) {
    throw Error("drug positions (" + std::to_string(u) + ", " + std::to_string(v) + ") invalid for " +
                std::to_string(tokens.size()) + " tokens");
  }
  if (u >= t_max || v >= t_max) {
    throw DrugTruncated("drug position " + std::to_string(std::max(u, v)) + " lies beyond t_max=" +
                        std::to_string(t_max));
  }
  Instance inst;
  inst.u = u;
  inst.v = v;
  std::size_t n = std::min(tokens.size(), t_max);
  inst.tokens.reserve(n);
  for (std::size_t i = 0; i < n; ++i) inst.tokens.push_back(vocab.index(tokens[i]));
  if (inst.tokens[u] != Vocabulary::kDrug1 || inst.tokens[v] != Vocabulary::kDrug2) {
    throw Error("positions u/v do not hold the drug1/drug2 tokens");
  }
  return inst;
}

Instance encode_instance(const BlindedInstance& blinded, const Vocabulary& vocab, std::size_t t_max) {
  Instance inst;
  try {
    inst = encode_instance(blinded.tokens, blinded.u, blinded.v, vocab, t_max);
  } catch (const DrugTruncated& e) {
    throw DrugTruncated(blinded.source.doc_id + "/" + blinded.source.sent_id + "/" + blinded.source.pair_id +
                        ": " + e.what());
  }
  inst.key = blinded.key;
  inst.label = blinded.label;
  inst.source = blinded.source;
  return inst;
}

EncodedCorpus encode_corpus(std::span<const BlindedInstance> blinded, const Vocabulary& vocab,
                            std::size_t t_max) {
  EncodedCorpus out;
  for (std::size_t i = 0; i < blinded.size(); ++i) {
    try {
      auto inst = encode_instance(blinded[i], vocab, t_max);
      inst.ordinal = i;
      out.instances.push_back(std::move(inst));
    } catch (const DrugTruncated& e) {
      out.rejected.push_back({blinded[i].source, blinded[i].key, blinded[i].label, i, e.what()});
    }
  }
  return out;
}

PairGroups group_by_pair(std::span<const Instance> instances) {
  PairGroups groups;
  for (const auto& inst : instances) groups[inst.key].push_back(&inst);
  return groups;
}

void write_instance_dump(std::ostream& out, std::span<const BlindedInstance> instances) {
  for (const auto& inst : instances) {
    out << inst.source.doc_id << '\t' << inst.source.sent_id << '\t' << inst.source.pair_id << '\t'
        << label_name(inst.label) << '\t' << inst.u << '\t' << inst.v << '\t';
    for (std::size_t i = 0; i < inst.tokens.size(); ++i) {
      if (i) out << ' ';
      out << inst.tokens[i];
    }
    out << '\n';
  }
}

}  // namespace ddi
