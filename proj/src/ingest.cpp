// Copyright 2026 The Scriptorium Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "scriptorium/ingest.hpp"

#include <expat.h>

#include <map>
#include <memory>
#include <nlohmann/json.hpp>

#include "scriptorium/errors.hpp"
#include "scriptorium/unicode.hpp"
#include "util.hpp"

namespace scriptorium {
namespace {

constexpr char kNsSep = '\x01';
constexpr std::string_view kPageNsPrefix = "http://schema.primaresearch.org/PAGE/gts/pagecontent/";
constexpr std::string_view kAltoNamespaces[] = {
    "http://www.loc.gov/standards/alto/ns-v2#",
    "http://www.loc.gov/standards/alto/ns-v3#",
    "http://www.loc.gov/standards/alto/ns-v4#",
    "http://schema.ccs-gmbh.com/ALTO",
};

struct Element {
  std::string ns;
  std::string name;  // local name
  std::map<std::string, std::string> attrs;  // keyed by local name
  std::vector<std::unique_ptr<Element>> children;
  std::string text;  // character data directly inside this element
  Element* parent = nullptr;

  const std::string* attr(const std::string& key) const {
    auto it = attrs.find(key);
    return it == attrs.end() ? nullptr : &it->second;
  }
};

void split_name(const char* qname, std::string& ns, std::string& local) {
  std::string_view q(qname);
  auto pos = q.find(kNsSep);
  if (pos == std::string_view::npos) {
    ns.clear();
    local.assign(q);
  } else {
    ns.assign(q.substr(0, pos));
    local.assign(q.substr(pos + 1));
  }
}

struct TreeBuilder {
  std::unique_ptr<Element> root;
  Element* current = nullptr;

  static void on_start(void* data, const XML_Char* name, const XML_Char** atts) {
    auto* self = static_cast<TreeBuilder*>(data);
    auto el = std::make_unique<Element>();
    split_name(name, el->ns, el->name);
    for (int i = 0; atts[i]; i += 2) {
      std::string ans, alocal;
      split_name(atts[i], ans, alocal);
      el->attrs.emplace(std::move(alocal), atts[i + 1]);
    }
    el->parent = self->current;
    Element* raw = el.get();
    if (self->current) self->current->children.push_back(std::move(el));
    else self->root = std::move(el);
    self->current = raw;
  }

  static void on_end(void* data, const XML_Char*) {
    auto* self = static_cast<TreeBuilder*>(data);
    self->current = self->current->parent;
  }

  static void on_text(void* data, const XML_Char* s, int len) {
    auto* self = static_cast<TreeBuilder*>(data);
    if (self->current) self->current->text.append(s, static_cast<std::size_t>(len));
  }
};

std::unique_ptr<Element> parse_xml(std::string_view bytes) {
  std::unique_ptr<XML_ParserStruct, decltype(&XML_ParserFree)> parser(XML_ParserCreateNS("UTF-8", kNsSep),
                                                                       &XML_ParserFree);
  if (!parser) throw Error("cannot allocate XML parser");
  TreeBuilder builder;
  XML_SetUserData(parser.get(), &builder);
  XML_SetElementHandler(parser.get(), &TreeBuilder::on_start, &TreeBuilder::on_end);
  XML_SetCharacterDataHandler(parser.get(), &TreeBuilder::on_text);
  if (XML_Parse(parser.get(), bytes.data(), static_cast<int>(bytes.size()), XML_TRUE) == XML_STATUS_ERROR) {
    SourceLocation where{static_cast<std::size_t>(XML_GetCurrentLineNumber(parser.get())),
                         static_cast<std::size_t>(XML_GetCurrentColumnNumber(parser.get())) + 1};
    throw XmlError(where, XML_ErrorString(XML_GetErrorCode(parser.get())));
  }
  if (!builder.root) throw XmlError({1, 1}, "no root element");
  return std::move(builder.root);
}

bool is_page_root(const Element& root) {
  return root.name == "PcGts" && std::string_view(root.ns).substr(0, kPageNsPrefix.size()) == kPageNsPrefix;
}

bool is_alto_root(const Element& root) {
  if (root.name != "alto") return false;
  for (auto ns : kAltoNamespaces)
    if (root.ns == ns) return true;
  return false;
}

// Line text: newlines become spaces, surrounding whitespace removed, NFC.
std::string clean_line(std::string_view raw) {
  std::string s(raw);
  for (char& c : s)
    if (c == '\n' || c == '\r' || c == '\t') c = ' ';
  return unicode::nfc(detail::trim(s));
}

const Element* child(const Element& el, std::string_view name) {
  for (const auto& c : el.children)
    if (c->name == name) return c.get();
  return nullptr;
}

const std::string* ancestor_attr(const Element& el, std::string_view ancestor, const std::string& key) {
  for (const Element* p = el.parent; p; p = p->parent)
    if (p->name == ancestor) return p->attr(key);
  return nullptr;
}

std::optional<std::string> opt(const std::string* s) {
  return s ? std::optional<std::string>(*s) : std::nullopt;
}

// The TextLine's own TextEquiv; with several, the one with the lowest @index.
std::string page_line_text(const Element& line) {
  const Element* best = nullptr;
  long best_index = 0;
  for (const auto& c : line.children) {
    if (c->name != "TextEquiv") continue;
    long idx = 0;
    if (auto* s = c->attr("index")) {
      try {
        idx = std::stol(*s);
      } catch (const std::logic_error&) {
        idx = 0;
      }
    }
    if (!best || idx < best_index) {
      best = c.get();
      best_index = idx;
    }
  }
  if (!best) return {};
  const Element* uni = child(*best, "Unicode");
  return uni ? clean_line(uni->text) : std::string();
}

void collect_page_lines(const Element& el, Document& doc) {
  if (el.name == "TextLine") {
    TextLine line;
    line.text = page_line_text(el);
    if (auto* f = ancestor_attr(el, "Page", "imageFilename")) line.page_ref = *f;
    line.region_ref = opt(ancestor_attr(el, "TextRegion", "id"));
    doc.lines.push_back(std::move(line));
    return;  // nested Word/Glyph lines do not exist in PAGE
  }
  for (const auto& c : el.children) collect_page_lines(*c, doc);
}

std::string alto_line_text(const Element& line) {
  std::string text;
  bool glue = false;
  for (const auto& c : line.children) {
    if (c->name == "String") {
      const auto* content = c->attr("CONTENT");
      if (!content || content->empty()) continue;
      if (!text.empty() && !glue) text.push_back(' ');
      text += *content;
      glue = false;
    } else if (c->name == "HYP") {
      if (const auto* content = c->attr("CONTENT")) text += *content;
      glue = true;
    }
  }
  return clean_line(text);
}

void collect_alto_lines(const Element& el, Document& doc) {
  if (el.name == "TextLine") {
    TextLine line;
    line.text = alto_line_text(el);
    if (auto* p = ancestor_attr(el, "Page", "ID")) line.page_ref = *p;
    line.region_ref = opt(ancestor_attr(el, "TextBlock", "ID"));
    doc.lines.push_back(std::move(line));
    return;
  }
  for (const auto& c : el.children) collect_alto_lines(*c, doc);
}

Document page_from_tree(const Element& root, std::string id) {
  Document doc;
  doc.id = std::move(id);
  doc.source_format = SourceFormat::PageXml;
  doc.metadata.shelfmark = doc.id;
  collect_page_lines(root, doc);
  return doc;
}

Document alto_from_tree(const Element& root, std::string id) {
  Document doc;
  doc.id = std::move(id);
  doc.source_format = SourceFormat::AltoXml;
  doc.metadata.shelfmark = doc.id;
  if (const auto* layout = child(root, "Layout")) collect_alto_lines(*layout, doc);
  return doc;
}

std::string_view strip_bom(std::string_view bytes) {
  if (bytes.substr(0, 3) == "\xEF\xBB\xBF") bytes.remove_prefix(3);
  return bytes;
}

}  // namespace

std::string_view to_string(SourceFormat f) {
  switch (f) {
    case SourceFormat::PageXml: return "page-xml";
    case SourceFormat::AltoXml: return "alto-xml";
    case SourceFormat::Plain: return "plain";
  }
  return "plain";
}

Document parse_page_xml(std::string_view bytes, std::string id) {
  auto root = parse_xml(bytes);
  if (!is_page_root(*root))
    throw FormatError("not a PAGE document: root is {" + root->ns + "}" + root->name);
  return page_from_tree(*root, std::move(id));
}

Document parse_alto_xml(std::string_view bytes, std::string id) {
  auto root = parse_xml(bytes);
  if (!is_alto_root(*root))
    throw FormatError("not an ALTO document: root is {" + root->ns + "}" + root->name);
  return alto_from_tree(*root, std::move(id));
}

Document parse_plaintext(std::string_view bytes, std::string id) {
  bytes = strip_bom(bytes);
  unicode::check_utf8(bytes);
  Document doc;
  doc.id = std::move(id);
  doc.metadata.shelfmark = doc.id;
  doc.source_format = SourceFormat::Plain;
  for (auto line : detail::split_lines(bytes)) doc.lines.push_back({unicode::nfc(line), std::nullopt, std::nullopt});
  return doc;
}

Document parse_document(std::string_view bytes, std::string id) {
  auto body = detail::trim(strip_bom(bytes));
  if (!body.empty() && body.front() == '<') {
    auto root = parse_xml(bytes);
    if (is_page_root(*root)) return page_from_tree(*root, std::move(id));
    if (is_alto_root(*root)) return alto_from_tree(*root, std::move(id));
    throw FormatError("unrecognized XML root {" + root->ns + "}" + root->name);
  }
  return parse_plaintext(bytes, std::move(id));
}

std::vector<Token> tokenize_line(std::string_view line, std::size_t line_index) {
  std::vector<Token> tokens;
  const auto clusters = unicode::segment_graphemes(line);
  std::size_t i = 0;
  while (i < clusters.size()) {
    if (unicode::is_space_cluster(clusters[i])) {
      ++i;
      continue;
    }
    Token t;
    t.line = line_index;
    t.index = tokens.size();
    t.begin = i;
    while (i < clusters.size() && !unicode::is_space_cluster(clusters[i])) t.surface += clusters[i++];
    t.end = i;
    tokens.push_back(std::move(t));
  }
  return tokens;
}

std::vector<Token> tokenize(const Document& doc) {
  std::vector<Token> tokens;
  for (std::size_t li = 0; li < doc.lines.size(); ++li) {
    auto line_tokens = tokenize_line(doc.lines[li].text, li);
    tokens.insert(tokens.end(), std::make_move_iterator(line_tokens.begin()), std::make_move_iterator(line_tokens.end()));
  }
  return tokens;
}

std::string to_corpus_jsonl(const std::vector<Document>& docs) {
  std::string out;
  for (const auto& doc : docs) {
    for (std::size_t i = 0; i < doc.lines.size(); ++i) {
      nlohmann::ordered_json rec;
      rec["id"] = doc.id;
      rec["line"] = i;
      rec["text"] = doc.lines[i].text;
      rec["page_ref"] = doc.lines[i].page_ref ? nlohmann::ordered_json(*doc.lines[i].page_ref) : nlohmann::ordered_json(nullptr);
      out += rec.dump();
      out += '\n';
    }
  }
  return out;
}

std::vector<Document> from_corpus_jsonl(std::string_view text) {
  std::vector<Document> docs;
  std::map<std::string, std::size_t> index;
  const auto lines = detail::split_lines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (detail::trim(lines[n]).empty()) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(lines[n]);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError({n + 1, 0}, e.what());
    }
    if (!rec.is_object() || !rec.contains("id") || !rec.contains("text"))
      throw ParseError({n + 1, 0}, "corpus record needs \"id\" and \"text\"");
    const auto id = rec["id"].get<std::string>();
    auto [it, fresh] = index.try_emplace(id, docs.size());
    if (fresh) {
      Document d;
      d.id = id;
      d.metadata.shelfmark = id;
      docs.push_back(std::move(d));
    }
    TextLine line;
    line.text = unicode::nfc(rec["text"].get<std::string>());
    if (rec.contains("page_ref") && rec["page_ref"].is_string()) line.page_ref = rec["page_ref"].get<std::string>();
    docs[it->second].lines.push_back(std::move(line));
  }
  return docs;
}

}  // namespace scriptorium
