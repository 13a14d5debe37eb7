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

#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <set>
#include <sstream>

#include "ddi/corpus/blinding.hpp"
#include "ddi/corpus/corpus.hpp"
#include "ddi/corpus/instance.hpp"
#include "ddi/corpus/label.hpp"
#include "ddi/corpus/text.hpp"
#include "ddi/corpus/vocabulary.hpp"
#include "ddi/errors.hpp"
#include "synthetic.hpp"

namespace fs = std::filesystem;
using namespace ddi;

namespace {

const std::string kData = DDI_TEST_DATA_DIR;

std::string joined(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) out += (out.empty() ? "" : " ") + t;
  return out;
}

}  // namespace

TEST(Label, NamesAndParsing) {
  for (auto l : kAllLabels) {
    EXPECT_EQ(parse_label(label_name(l)), l);
    EXPECT_EQ(label_from_index(label_index(l)), l);
  }
  EXPECT_EQ(parse_label("mechanism"), DdiLabel::Mechanism);
  EXPECT_EQ(parse_label("3"), DdiLabel::Advise);
  EXPECT_FALSE(parse_label("synergy").has_value());
  EXPECT_EQ(label_from_corpus("false", ""), DdiLabel::False);
  EXPECT_EQ(label_from_corpus("true", "int"), DdiLabel::Int);
}

TEST(Tokenize, Examples) {
  EXPECT_EQ(tokenize("Clinical implications of warfarin."),
            (std::vector<std::string>{"clinical", "implications", "of", "warfarin", "."}));
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_EQ(tokenize("drug1: combined use"), (std::vector<std::string>{"drug1", ":", "combined", "use"}));
  EXPECT_EQ(tokenize("(a/b), c;"), (std::vector<std::string>{"(", "a", "/", "b", ")", ",", "c", ";"}));
}

TEST(Utf8, LengthAndSubstr) {
  const std::string s = "Café β-x";
  EXPECT_EQ(utf8_length(s), 8u);
  EXPECT_EQ(utf8_substr(s, 5, 3), "β-x");
}

TEST(ParseCorpus, MethotrexateFixture) {
  auto sentences = parse_corpus(kData + "/methotrexate.xml");
  ASSERT_EQ(sentences.size(), 1u);
  EXPECT_EQ(sentences[0].entities.size(), 3u);
  EXPECT_EQ(sentences[0].pairs.size(), 3u);
  EXPECT_EQ(sentences[0].doc_id, "DDI-DrugBank.d1");
  EXPECT_EQ(sentences[0].pairs[2].label, DdiLabel::Effect);
}

TEST(ParseCorpus, EmptyDirectory) {
  const auto dir = fixtures::temp_dir("empty_corpus");
  EXPECT_TRUE(parse_corpus(dir).empty());
}

TEST(ParseCorpus, MissingPathThrows) { EXPECT_THROW(parse_corpus("/nonexistent/corpus.xml"), IoError); }

TEST(ParseCorpus, DanglingPairIsSchemaError) {
  try {
    parse_corpus(kData + "/dangling_pair.xml");
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("d9"), std::string::npos);
  }
}

TEST(ParseCorpus, MalformedXml) {
  EXPECT_THROW(parse_corpus_xml("<document id=\"a\"><sentence id=\"s\" text=\"x\">", "bad.xml"), XmlSyntaxError);
}

TEST(ParseCorpus, SchemaViolations) {
  auto wrap = [](const std::string& body) {
    return "<document id=\"D\"><sentence id=\"D.s0\" text=\"Aspirin and warfarin.\">" + body +
           "</sentence></document>";
  };
  const std::string e0 = "<entity id=\"e0\" charOffset=\"0-6\" type=\"drug\" text=\"Aspirin\"/>";
  const std::string e1 = "<entity id=\"e1\" charOffset=\"12-19\" type=\"drug\" text=\"warfarin\"/>";
  EXPECT_NO_THROW(parse_corpus_xml(wrap(e0 + e1 + "<pair id=\"p\" e1=\"e0\" e2=\"e1\" ddi=\"false\"/>"), "ok"));
  EXPECT_THROW(parse_corpus_xml(wrap("<entity id=\"e0\" charOffset=\"0-60\" type=\"drug\" text=\"A\"/>"), "x"),
               SchemaError);
  EXPECT_THROW(parse_corpus_xml(wrap("<entity id=\"e0\" charOffset=\"0-6\" type=\"drug\" text=\"Asprin\"/>"), "x"),
               SchemaError);
  EXPECT_THROW(parse_corpus_xml(wrap(e0 + e0), "x"), SchemaError);
  EXPECT_THROW(parse_corpus_xml(wrap(e0 + e1 + "<pair id=\"p\" e1=\"e0\" e2=\"e1\" ddi=\"maybe\"/>"), "x"),
               SchemaError);
  EXPECT_THROW(parse_corpus_xml(wrap(e0 + e1 + "<pair id=\"p\" e1=\"e0\" e2=\"e1\" ddi=\"true\" type=\"odd\"/>"), "x"),
               SchemaError);
  EXPECT_THROW(parse_corpus_xml(wrap(e0 + "<pair id=\"p\" e1=\"e0\" e2=\"e0\" ddi=\"false\"/>"), "x"), SchemaError);
  EXPECT_THROW(parse_corpus_xml(wrap("<entity id=\"e0\" type=\"drug\" text=\"Aspirin\"/>"), "x"), SchemaError);
}

TEST(ParseCorpus, UnicodeOffsetsAndDiscontinuousSpans) {
  auto sentences = parse_corpus(kData + "/unicode.xml");
  ASSERT_EQ(sentences.size(), 1u);
  const auto& e2 = sentences[0].entities[2];
  EXPECT_EQ(e2.char_start, 45u);
  EXPECT_EQ(e2.char_end, 62u);
  auto blinded = blind_instances(sentences[0]);
  ASSERT_EQ(blinded.instances.size(), 3u);
  EXPECT_EQ(joined(blinded.instances[0].tokens), "café drug1 increase drug2 levels ; drug0 too .");
  EXPECT_EQ(blinded.instances[0].key.drug1, "β-blockers");
  EXPECT_EQ(joined(blinded.instances[2].tokens), "café drug0 increase drug1 levels ; drug2 too .");
  EXPECT_EQ(blinded.instances[2].key.drug2, "thiazide diuretics");
}

TEST(ParseCorpus, Pure) {
  const auto path = kData + "/methotrexate.xml";
  EXPECT_EQ(parse_corpus(path), parse_corpus(path));
}

TEST(ParseCorpus, DirectoryScanIsSorted) {
  const auto dir = fixtures::temp_dir("scan");
  auto sentences = fixtures::synthetic_sentences(1);
  fs::create_directories(dir + "/sub");
  fixtures::write_file(dir + "/sub/b.xml", fixtures::to_xml(std::span(sentences).subspan(2, 3)));
  fixtures::write_file(dir + "/a.xml", fixtures::to_xml(std::span(sentences).subspan(0, 2)));
  fixtures::write_file(dir + "/notes.txt", "ignored");
  EXPECT_EQ(parse_corpus(dir), sentences);
}

TEST(Blinding, MethotrexateGeneratesThreeInstances) {
  auto sentences = parse_corpus(kData + "/methotrexate.xml");
  auto result = blind_instances(sentences[0]);
  ASSERT_EQ(result.instances.size(), 3u);
  EXPECT_TRUE(result.skipped.empty());
  const auto& third = result.instances[2];
  EXPECT_EQ(joined(third.tokens),
            "drug0 : an increased risk of hepatitis has been reported to result from combined use of drug1 and "
            "drug2 .");
  EXPECT_EQ(third.key, (PairKey{"methotrexate", "etretinate"}));
  EXPECT_EQ(third.label, DdiLabel::Effect);
  EXPECT_EQ(third.tokens[third.u], kDrug1Token);
  EXPECT_EQ(third.tokens[third.v], kDrug2Token);
  EXPECT_EQ(joined(result.instances[0].tokens).substr(0, 8), "drug1 : ");
}

TEST(Blinding, SingleEntityGivesNothing) {
  RawSentence s{"D", "D.s0", "Aspirin alone.", {{"e0", 0, 6, "Aspirin", "drug"}}, {}};
  EXPECT_TRUE(blind_instances(s).instances.empty());
}

TEST(Blinding, TwoEntitiesNoDrug0) {
  RawSentence s{"D", "D.s0", "Aspirin and warfarin.",
                {{"e0", 0, 6, "Aspirin", "drug"}, {"e1", 12, 19, "warfarin", "drug"}},
                {{"p0", "e0", "e1", DdiLabel::Int}}};
  auto r = blind_instances(s);
  ASSERT_EQ(r.instances.size(), 1u);
  EXPECT_EQ(r.instances[0].tokens, (std::vector<std::string>{"drug1", "and", "drug2", "."}));
  EXPECT_EQ(r.instances[0].u, 0u);
  EXPECT_EQ(r.instances[0].v, 2u);
}

TEST(Blinding, DocumentOrderDecidesRoles) {
  RawSentence s{"D", "D.s0", "Aspirin and warfarin.",
                {{"e0", 0, 6, "Aspirin", "drug"}, {"e1", 12, 19, "warfarin", "drug"}},
                {{"p0", "e1", "e0", DdiLabel::Int}}};
  auto r = blind_instances(s);
  ASSERT_EQ(r.instances.size(), 1u);
  EXPECT_EQ(r.instances[0].key, (PairKey{"aspirin", "warfarin"}));
}

TEST(Blinding, OverlappingSpansAreSkipped) {
  RawSentence s{"D", "D.s0", "thiazide diuretics and lithium",
                {{"e0", 0, 17, "thiazide diuretics", "group"}, {"e1", 0, 7, "thiazide", "drug"},
                 {"e2", 23, 29, "lithium", "drug"}},
                {{"p0", "e0", "e2", DdiLabel::Int}, {"p1", "e1", "e2", DdiLabel::False}}};
  auto r = blind_instances(s);
  EXPECT_TRUE(r.instances.empty());
  ASSERT_EQ(r.skipped.size(), 2u);
  EXPECT_EQ(r.skipped[0].reason, "overlapping entity spans");
}

TEST(Blinding, MultiWordDrugIsOneToken) {
  RawSentence s{"D", "D.s0", "thiazide diuretics and lithium",
                {{"e0", 0, 17, "thiazide diuretics", "group"}, {"e1", 23, 29, "lithium", "drug"}},
                {{"p0", "e0", "e1", DdiLabel::Int}}};
  auto r = blind_instances(s);
  ASSERT_EQ(r.instances.size(), 1u);
  EXPECT_EQ(r.instances[0].tokens, (std::vector<std::string>{"drug1", "and", "drug2"}));
}

TEST(BlindingProperty, ExhaustivePairsGiveChooseTwo) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> n_dist(2, 6);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = n_dist(rng);
    auto s = fixtures::random_sentence(n, rng);
    auto r = blind_instances(s);
    ASSERT_EQ(r.instances.size(), n * (n - 1) / 2);
    for (const auto& inst : r.instances) {
      EXPECT_EQ(std::count(inst.tokens.begin(), inst.tokens.end(), kDrug1Token), 1);
      EXPECT_EQ(std::count(inst.tokens.begin(), inst.tokens.end(), kDrug2Token), 1);
      EXPECT_EQ(std::count(inst.tokens.begin(), inst.tokens.end(), kDrug0Token), static_cast<long>(n - 2));
    }
  }
}

TEST(Vocabulary, ReservedAndCounting) {
  BlindedInstance inst;
  inst.tokens = {"drug1", "inhibits", "drug2"};
  inst.v = 2;
  auto vocab = build_vocabulary(std::span(&inst, 1));
  EXPECT_EQ(vocab.size(), 6u);
  EXPECT_EQ(vocab.index("<pad>"), 0u);
  EXPECT_EQ(vocab.index(kDrug1Token), Vocabulary::kDrug1);
  EXPECT_EQ(vocab.index("xyzzy"), Vocabulary::kUnk);
  EXPECT_THROW(vocab.token(99), IndexOutOfVocab);
  EXPECT_THROW(build_vocabulary({}), EmptyCorpus);
}

TEST(Vocabulary, MinCountAndOrdering) {
  std::vector<BlindedInstance> insts(2);
  insts[0].tokens = {"drug1", "b", "a", "drug2"};
  insts[1].tokens = {"drug1", "b", "rare", "drug2"};
  auto vocab = build_vocabulary(insts, 2);
  EXPECT_EQ(vocab.size(), 6u);
  EXPECT_EQ(vocab.index("rare"), Vocabulary::kUnk);
  auto full = build_vocabulary(insts);
  EXPECT_EQ(full.token(5), "b");
  EXPECT_EQ(full.token(6), "a");
  EXPECT_EQ(full.token(7), "rare");
  EXPECT_EQ(Vocabulary::from_tokens(full.tokens()).hash(), full.hash());
  EXPECT_NE(vocab.hash(), full.hash());
  EXPECT_THROW(Vocabulary::from_tokens({"a", "b"}), Error);
}

TEST(Instance, PaddingTruncationAndUnk) {
  Vocabulary vocab;
  vocab.add("inhibits");
  std::vector<std::string> tokens = {"drug1", "inhibits", "drug2"};
  auto inst = encode_instance(tokens, 0, 2, vocab, 5);
  EXPECT_EQ(inst.tokens, (std::vector<TokenId>{3, 5, 4}));

  std::vector<std::string> unk = {"drug1", "xyzzy", "drug2"};
  EXPECT_EQ(encode_instance(unk, 0, 2, vocab, 5).tokens[1], Vocabulary::kUnk);

  std::vector<std::string> long_tokens(120, "inhibits");
  long_tokens[3] = kDrug1Token;
  long_tokens[115] = kDrug2Token;
  EXPECT_THROW(encode_instance(long_tokens, 3, 115, vocab, 100), DrugTruncated);
  long_tokens[115] = "inhibits";
  long_tokens[50] = kDrug2Token;
  EXPECT_EQ(encode_instance(long_tokens, 3, 50, vocab, 100).tokens.size(), 100u);
  EXPECT_THROW(encode_instance(tokens, 0, 0, vocab, 5), Error);
}

TEST(Instance, RoundTripThroughVocabulary) {
  auto sentences = fixtures::synthetic_sentences(2);
  auto blinded = blind_corpus(sentences);
  auto vocab = build_vocabulary(blinded.instances);
  auto encoded = encode_corpus(blinded.instances, vocab, 100);
  ASSERT_EQ(encoded.instances.size(), blinded.instances.size());
  for (std::size_t i = 0; i < encoded.instances.size(); ++i) {
    std::vector<std::string> back;
    for (auto id : encoded.instances[i].tokens) back.push_back(vocab.token(id));
    EXPECT_EQ(back, blinded.instances[i].tokens);
  }
}

TEST(Instance, RejectedKeepOrdinal) {
  auto sentences = fixtures::synthetic_sentences(1);
  auto blinded = blind_corpus(sentences);
  auto vocab = build_vocabulary(blinded.instances);
  auto encoded = encode_corpus(blinded.instances, vocab, 3);
  EXPECT_EQ(encoded.total(), blinded.instances.size());
  EXPECT_FALSE(encoded.rejected.empty());
  std::set<std::size_t> ordinals;
  for (const auto& i : encoded.instances) ordinals.insert(i.ordinal);
  for (const auto& r : encoded.rejected) ordinals.insert(r.ordinal);
  EXPECT_EQ(ordinals.size(), blinded.instances.size());
}

TEST(GroupByPair, Grouping) {
  std::vector<Instance> insts(3);
  insts[0].key = {"iron", "cobalt"};
  insts[1].key = {"iron", "cobalt"};
  insts[2].key = {"cobalt", "iron"};
  auto groups = group_by_pair(insts);
  EXPECT_EQ(groups.size(), 2u);
  EXPECT_EQ(groups.at(PairKey{"iron", "cobalt"}).size(), 2u);
  EXPECT_TRUE(group_by_pair({}).empty());
}

TEST(InstanceDump, Format) {
  auto sentences = parse_corpus(kData + "/methotrexate.xml");
  auto result = blind_instances(sentences[0]);
  std::ostringstream out;
  write_instance_dump(out, result.instances);
  std::string first;
  std::istringstream in(out.str());
  std::getline(in, first);
  EXPECT_EQ(first.substr(0, first.find("\tdrug1")),
            "DDI-DrugBank.d1\tDDI-DrugBank.d1.s0\tDDI-DrugBank.d1.s0.p0\tFalse\t0\t16");
}
