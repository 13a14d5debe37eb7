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

#include "ddi/corpus/corpus.hpp"

#include <expat.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iterator>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include "ddi/corpus/text.hpp"
#include "ddi/errors.hpp"

namespace ddi {

const Entity* RawSentence::find_entity(std::string_view id) const {
  auto it = std::find_if(entities.begin(), entities.end(), [&](const Entity& e) { return e.id == id; });
  return it == entities.end() ? nullptr : &*it;
}

namespace {

using AttrMap = std::map<std::string_view, std::string_view>;

AttrMap collect_attrs(const XML_Char** attrs) {
  AttrMap out;
  for (std::size_t i = 0; attrs[i] != nullptr; i += 2) out.emplace(attrs[i], attrs[i + 1]);
  return out;
}

std::optional<std::size_t> parse_index(std::string_view s) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

// "12-20" or "12-20;25-30". Only the first span is kept.
std::optional<std::pair<std::size_t, std::size_t>> parse_char_offset(std::string_view s) {
  auto first = s.substr(0, s.find(';'));
  auto dash = first.find('-');
  if (dash == std::string_view::npos) return std::nullopt;
  auto start = parse_index(first.substr(0, dash));
  auto end = parse_index(first.substr(dash + 1));
  if (!start || !end) return std::nullopt;
  return std::pair{*start, *end};
}

struct PendingPair {
  GoldPair pair;
  std::size_t line;
};

class CorpusHandler {
 public:
  CorpusHandler(XML_Parser parser, std::string file) : parser_(parser), file_(std::move(file)) {}

  void start(const XML_Char* name, const XML_Char** attrs) {
    if (failed()) return;
    std::string_view tag(name);
    AttrMap a = collect_attrs(attrs);
    if (tag == "document") {
      doc_id_ = std::string(require(a, "id"));
      in_document_ = true;
    } else if (tag == "sentence") {
      if (!in_document_) return fail("sentence outside of a document element");
      if (in_sentence_) return fail("nested sentence element");
      sentence_ = RawSentence{};
      sentence_.doc_id = doc_id_;
      sentence_.sent_id = std::string(require(a, "id"));
      sentence_.text = std::string(require(a, "text"));
      cp_count_ = utf8_length(sentence_.text);
      pending_.clear();
      in_sentence_ = true;
    } else if (tag == "entity") {
      if (!in_sentence_) return fail("entity outside of a sentence element");
      add_entity(a);
    } else if (tag == "pair") {
      if (!in_sentence_) return fail("pair outside of a sentence element");
      add_pair(a);
    }
  }

  void end(const XML_Char* name) {
    if (failed()) return;
    std::string_view tag(name);
    if (tag == "sentence") {
      finish_sentence();
      in_sentence_ = false;
    } else if (tag == "document") {
      in_document_ = false;
    }
  }

  bool failed() const { return error_.has_value(); }
  const std::string& error() const { return *error_; }
  std::size_t error_line() const { return error_line_; }
  std::vector<RawSentence> take() { return std::move(out_); }

 private:
  std::string_view require(const AttrMap& a, std::string_view key) {
    auto it = a.find(key);
    if (it == a.end()) {
      fail("missing attribute '" + std::string(key) + "'");
      return {};
    }
    return it->second;
  }

  void add_entity(const AttrMap& a) {
    Entity e;
    e.id = std::string(require(a, "id"));
    auto offset_attr = require(a, "charOffset");
    e.surface = std::string(require(a, "text"));
    auto type_it = a.find("type");
    if (type_it != a.end()) e.drug_type = std::string(type_it->second);
    if (failed()) return;
    auto span = parse_char_offset(offset_attr);
    if (!span) return fail("malformed charOffset '" + std::string(offset_attr) + "'");
    e.char_start = span->first;
    e.char_end = span->second;
    if (e.char_start > e.char_end || e.char_end >= cp_count_) {
      return fail("entity " + e.id + " offsets " + std::string(offset_attr) + " outside sentence text");
    }
    if (offset_attr.find(';') == std::string_view::npos) {
      auto slice = utf8_substr(sentence_.text, e.char_start, e.char_end - e.char_start + 1);
      if (collapse_whitespace(slice) != collapse_whitespace(e.surface)) {
        return fail("entity " + e.id + " text '" + e.surface + "' does not match sentence slice '" +
                    std::string(slice) + "'");
      }
    }
    if (sentence_.find_entity(e.id) != nullptr) return fail("duplicate entity id " + e.id);
    sentence_.entities.push_back(std::move(e));
  }

  void add_pair(const AttrMap& a) {
    GoldPair p;
    p.id = std::string(require(a, "id"));
    p.e1 = std::string(require(a, "e1"));
    p.e2 = std::string(require(a, "e2"));
    auto ddi = require(a, "ddi");
    if (failed()) return;
    auto type_it = a.find("type");
    std::string_view type = type_it == a.end() ? std::string_view{} : type_it->second;
    auto label = label_from_corpus(ddi, type);
    if (!label) {
      return fail("pair " + p.id + " has invalid ddi/type '" + std::string(ddi) + "'/'" + std::string(type) +
                  "'");
    }
    p.label = *label;
    if (p.e1 == p.e2) return fail("pair " + p.id + " references the same entity twice");
    pending_.push_back({std::move(p), current_line()});
  }

  void finish_sentence() {
    for (auto& [pair, line] : pending_) {
      for (const auto* ref : {&pair.e1, &pair.e2}) {
        if (sentence_.find_entity(*ref) == nullptr) {
          error_line_ = line;
          error_ = "pair " + pair.id + " references unknown entity '" + *ref + "'";
          return;
        }
      }
      sentence_.pairs.push_back(std::move(pair));
    }
    out_.push_back(std::move(sentence_));
  }

  std::size_t current_line() const { return XML_GetCurrentLineNumber(parser_); }

  void fail(std::string message) {
    if (failed()) return;
    error_ = std::move(message);
    error_line_ = current_line();
    XML_StopParser(parser_, XML_FALSE);
  }

  XML_Parser parser_;
  std::string file_;
  std::string doc_id_;
  bool in_document_ = false;
  bool in_sentence_ = false;
  RawSentence sentence_;
  std::size_t cp_count_ = 0;
  std::vector<PendingPair> pending_;
  std::vector<RawSentence> out_;
  std::optional<std::string> error_;
  std::size_t error_line_ = 0;
};

void XMLCALL on_start(void* data, const XML_Char* name, const XML_Char** attrs) {
  static_cast<CorpusHandler*>(data)->start(name, attrs);
}

void XMLCALL on_end(void* data, const XML_Char* name) { static_cast<CorpusHandler*>(data)->end(name); }

struct ParserDeleter {
  void operator()(XML_Parser p) const { XML_ParserFree(p); }
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path.string());
  return buf.str();
}

}  // namespace

std::vector<RawSentence> parse_corpus_xml(std::string_view xml, const std::string& file_name) {
  std::unique_ptr<std::remove_pointer_t<XML_Parser>, ParserDeleter> parser(XML_ParserCreate("UTF-8"));
  if (!parser) throw Error("cannot allocate XML parser");
  CorpusHandler handler(parser.get(), file_name);
  XML_SetUserData(parser.get(), &handler);
  XML_SetElementHandler(parser.get(), on_start, on_end);

  auto status = XML_Parse(parser.get(), xml.data(), static_cast<int>(xml.size()), XML_TRUE);
  if (handler.failed()) throw SchemaError(file_name, handler.error_line(), handler.error());
  if (status != XML_STATUS_OK) {
    throw XmlSyntaxError(file_name, XML_GetCurrentLineNumber(parser.get()),
                         XML_GetCurrentColumnNumber(parser.get()),
                         XML_ErrorString(XML_GetErrorCode(parser.get())));
  }
  return handler.take();
}

std::vector<RawSentence> parse_corpus(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::exists(path, ec)) throw IoError("corpus path does not exist: " + path.string());

  std::vector<fs::path> files;
  if (fs::is_directory(path, ec)) {
    for (fs::recursive_directory_iterator it(path, ec), end; it != end; it.increment(ec)) {
      if (ec) throw IoError("cannot list " + path.string() + ": " + ec.message());
      if (it->is_regular_file() && it->path().extension() == ".xml") files.push_back(it->path());
    }
    if (ec) throw IoError("cannot list " + path.string() + ": " + ec.message());
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(path);
  }

  std::vector<RawSentence> out;
  for (const auto& file : files) {
    auto sentences = parse_corpus_xml(read_file(file), file.string());
    out.insert(out.end(), std::make_move_iterator(sentences.begin()), std::make_move_iterator(sentences.end()));
  }
  return out;
}

}  // namespace ddi
