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

#include <doctest.h>

#include "scriptorium/errors.hpp"
#include "scriptorium/ingest.hpp"
#include "scriptorium/unicode.hpp"
#include "support/testing.hpp"

using namespace scriptorium;

namespace {

std::vector<std::string> texts(const Document& d) {
  std::vector<std::string> out;
  for (const auto& l : d.lines) out.push_back(l.text);
  return out;
}

const std::string kLine1 = "In principio creauit ðeuſ celū 7 terram.";
const std::string kLine2 = "Terra aūt erat inanis 7 uacua";

}  // namespace

TEST_CASE("PAGE XML") {
  const auto doc = parse_page_xml(testing::slurp(testing::fixture("documents/page_sample.xml")), "page");
  CHECK(doc.id == "page");
  CHECK(doc.source_format == SourceFormat::PageXml);
  REQUIRE(doc.lines.size() == 3);
  // lowest @index wins; region-level TextEquiv is not a line
  CHECK(texts(doc) ==
        std::vector<std::string>{kLine1, kLine2, "7 tenebre erant ſup faciē abyſſi."});
  CHECK(doc.lines[0].page_ref == "f001r.jpg");
  CHECK(doc.lines[0].region_ref == "r1");
  CHECK(doc.lines[2].region_ref == "r2");
  for (const auto& l : doc.lines) CHECK(unicode::is_nfc(l.text));
}

TEST_CASE("ALTO XML") {
  const auto doc = parse_alto_xml(testing::slurp(testing::fixture("documents/alto_sample.xml")), "alto");
  CHECK(doc.source_format == SourceFormat::AltoXml);
  CHECK(texts(doc) ==
        std::vector<std::string>{"In principio creauit ðeuſ", "celū 7 ter-", "ram."});
  CHECK(doc.lines[0].page_ref == "p1");
  CHECK(doc.lines[0].region_ref == "b1");
}

TEST_CASE("plain text") {
  const auto doc = parse_plaintext(testing::slurp(testing::fixture("documents/plain_sample.txt")), "plain");
  CHECK(texts(doc) == std::vector<std::string>{kLine1, kLine2});
  CHECK_FALSE(doc.lines[0].page_ref.has_value());
}

TEST_CASE("format detection") {
  CHECK(parse_document(testing::slurp(testing::fixture("documents/page_sample.xml"))).source_format ==
        SourceFormat::PageXml);
  CHECK(parse_document(testing::slurp(testing::fixture("documents/alto_sample.xml"))).source_format ==
        SourceFormat::AltoXml);
  CHECK(parse_document("just text\n").source_format == SourceFormat::Plain);
}

TEST_CASE("malformed input") {
  CHECK_THROWS_AS(parse_page_xml("<PcGts xmlns=\"http://schema.primaresearch.org/PAGE/gts/pagecontent/2019-07-15\">"),
                  XmlError);
  CHECK_THROWS_AS(parse_page_xml("<root/>"), FormatError);
  CHECK_THROWS_AS(parse_alto_xml("<alto xmlns=\"urn:other\"/>"), FormatError);
  CHECK_THROWS_AS(parse_plaintext("bad \xC3 byte"), EncodingError);
  try {
    parse_page_xml("<PcGts xmlns=\"http://schema.primaresearch.org/PAGE/gts/pagecontent/2019-07-15\">\n<Page>\n</PcGts>");
    FAIL("expected XmlError");
  } catch (const XmlError& e) {
    CHECK(e.where().line == 3);
  }
}

TEST_CASE("tokenization keeps clusters whole") {
  const auto tokens = tokenize_line("q̄ pepigi  7", 4);
  REQUIRE(tokens.size() == 3);
  CHECK(tokens[0].surface == "q̄");
  CHECK(tokens[1].surface == "pepigi");
  CHECK(tokens[1].begin == 2);
  CHECK(tokens[1].end == 8);
  CHECK(tokens[2].index == 2);
  CHECK(tokens[2].line == 4);
}

TEST_CASE("corpus JSONL round-trip") {
  const std::vector<Document> docs = {
      parse_page_xml(testing::slurp(testing::fixture("documents/page_sample.xml")), "page"),
      parse_plaintext(testing::slurp(testing::fixture("documents/plain_sample.txt")), "plain")};
  const auto back = from_corpus_jsonl(to_corpus_jsonl(docs));
  REQUIRE(back.size() == docs.size());
  for (std::size_t d = 0; d < docs.size(); ++d) {
    CHECK(back[d].id == docs[d].id);
    CHECK(texts(back[d]) == texts(docs[d]));
    for (std::size_t l = 0; l < docs[d].lines.size(); ++l) CHECK(back[d].lines[l].page_ref == docs[d].lines[l].page_ref);
  }
}
