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

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace scriptorium {

enum class SourceFormat { PageXml, AltoXml, Plain };
std::string_view to_string(SourceFormat f);

struct MetadataRecord {
  std::string shelfmark;
  std::vector<std::string> origin;
  std::optional<std::pair<int, int>> date_range;  // year_from <= year_to
  std::optional<std::string> institution;
};

struct TextLine {
  std::string text;  // diplomatic layer, NFC, no newlines
  std::optional<std::string> page_ref;
  std::optional<std::string> region_ref;

  bool operator==(const TextLine&) const = default;
};

struct Document {
  std::string id;
  std::vector<TextLine> lines;
  MetadataRecord metadata;
  SourceFormat source_format = SourceFormat::Plain;
};

struct Token {
  std::string surface;
  std::size_t line = 0;
  std::size_t index = 0;  // position within its line
  std::size_t begin = 0;  // grapheme offsets [begin, end) within the line
  std::size_t end = 0;
};

// PAGE XML (any 2009+ pagecontent namespace). One line per TextLine, taking
// the TextLine's own TextEquiv/Unicode. Throws XmlError / FormatError.
Document parse_page_xml(std::string_view bytes, std::string id = {});
// ALTO v2-v4. String/@CONTENT joined by single spaces; HYP content attaches
// to the preceding word without a space.
Document parse_alto_xml(std::string_view bytes, std::string id = {});
Document parse_plaintext(std::string_view bytes, std::string id = {});

// Dispatches on content: XML root namespaces select PAGE or ALTO, anything
// else is plain text.
Document parse_document(std::string_view bytes, std::string id = {});

// Maximal runs of non-space clusters; punctuation stays attached.
std::vector<Token> tokenize(const Document& doc);
std::vector<Token> tokenize_line(std::string_view line, std::size_t line_index);

// Line-per-record JSON corpus (JSON Lines): {"id","line","text","page_ref"}.
std::string to_corpus_jsonl(const std::vector<Document>& docs);
std::vector<Document> from_corpus_jsonl(std::string_view text);

}  // namespace scriptorium
