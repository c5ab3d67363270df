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

#include <nlohmann/json.hpp>

#include "scriptorium/errors.hpp"
#include "scriptorium/layers.hpp"
#include "scriptorium/unicode.hpp"
#include "support/testing.hpp"

using namespace scriptorium;
using scriptorium::testing::Rng;

namespace {

TransformRuleSet example_rules() {
  return parse_transform_rules(
      testing::slurp(std::filesystem::path(SCRIPTORIUM_FIXTURES) / "../../data/rules.example.tsv"));
}

TransformRuleSet rules(std::string_view text) { return parse_transform_rules(text); }

}  // namespace

TEST_CASE("rules file parsing") {
  const auto r = example_rules();
  CHECK(r.name() == "Paris Bible abbreviations");
  CHECK(r.rules().size() == 15);
  CHECK_THROWS_AS(rules("expand\ta\tanywhere\n"), ParseError);
  CHECK_THROWS_AS(rules("expand\ta\tsomewhere\tb\n"), ParseError);
  CHECK_THROWS_AS(rules("shrink\ta\tanywhere\tb\n"), ParseError);
  CHECK_THROWS_AS(rules("expand\ta\tanywhere\t\n"), ParseError);
  CHECK_THROWS_AS(rules("letterform\tab\tanywhere\tc\n"), ParseError);
  CHECK_THROWS_AS(rules("expand\ta\tanywhere\tU+0304\n"), ParseError);
  CHECK_THROWS_AS(rules("expand\ta\tanywhere\tb\nexpand\ta\tanywhere\tc\n"), DuplicateRule);
  CHECK_NOTHROW(rules("expand\ta\tanywhere\tb\nexpand\ta\tword-final\tc\n"));
}

TEST_CASE("firing order") {
  const auto r = rules("expand\ta\tanywhere\tx\nexpand\tab\tanywhere\ty\nexpand\tb\tanywhere\tz\t3\n");
  CHECK(r.firing_order() == std::vector<std::size_t>{2, 1, 0});
  // the longer pattern wins at equal priority
  CHECK(apply_transform("ab", rules("expand\ta\tanywhere\tx\nexpand\tab\tanywhere\ty\n"), false).derived == "y");
}

TEST_CASE("worked examples: diplomatic to normalised") {
  const auto r = example_rules();
  CHECK(apply_transform("faciē", r, false).derived == "faciem");
  CHECK(apply_transform("faci" "ē", r, false).derived == "faciem");
  CHECK(apply_transform("deuſ", r, false).derived == "deus");
  CHECK(apply_transform("q̄ pepigi", r, false).derived == "quod pepigi");
  CHECK(apply_transform("7 ñ erunt", r, false).derived == "et non erunt");
}

TEST_CASE("semi-diplomatic keeps letterforms") {
  Document doc{"d", {{"deuſ faciē 7 terra", std::nullopt, std::nullopt}}, {}, SourceFormat::Plain};
  const auto semi = derive_layer(doc, example_rules(), Layer::SemiDiplomatic);
  CHECK(semi.document.lines[0].text == "deuſ faciem et terra");
  CHECK(semi.lines[0].layer == Layer::SemiDiplomatic);
  CHECK(semi.lines[0].expansions_marked);
  bool any_marked = false;
  for (const auto& s : semi.lines[0].offset_map) any_marked |= s.marked;
  CHECK(any_marked);

  const auto norm = derive_layer(doc, example_rules(), Layer::Normalised);
  CHECK(norm.document.lines[0].text == "deus faciem et terra");
  const auto dip = derive_layer(doc, example_rules(), Layer::Diplomatic);
  CHECK(dip.document.lines[0].text == doc.lines[0].text);
}

TEST_CASE("contexts") {
  const auto r = rules("expand\tẽ\tword-final\tem\nexpand\txii.\tword-initial\tduodecim\n");
  CHECK(apply_transform("gentẽ magnam", r, false).derived == "gentem magnam");
  CHECK(apply_transform("gentẽ.", r, false).derived == "gentem.");
  CHECK(apply_transform("ẽx", r, false).derived == "ẽx");
  CHECK(apply_transform("xii. duces", r, false).derived == "duodecim duces");
  CHECK(apply_transform("axii.", r, false).derived == "axii.");
}

TEST_CASE("one pass, never recursive") {
  const auto r = rules("expand\ta\tanywhere\tb\nexpand\tb\tanywhere\tc\n");
  CHECK(apply_transform("ab", r, false).derived == "bc");
}

TEST_CASE("offset map") {
  const auto r = example_rules();
  const auto lt = apply_transform("mei q̄ pepigi", r, false);
  REQUIRE(lt.derived == "mei quod pepigi");
  // "quod" occupies derived clusters [4, 8); it came from source cluster 4
  CHECK(source_span_for(lt, {4, 8}) == Span{4, 5});
  CHECK(source_span_for(lt, {5, 6}) == Span{4, 5});
  CHECK(source_span_for(lt, {0, 3}) == Span{0, 3});
  CHECK(reconstruct_source(lt) == "mei q̄ pepigi");

  const auto unexp = apply_transform("celū", r, false);  // no rule for u-macron
  CHECK(unexp.derived == "celū");
  CHECK(unexp.unexpanded == std::vector<std::size_t>{3});
}

TEST_CASE("conservation: the offset map always reconstructs the source") {
  const auto r = example_rules();
  Rng rng(21);
  std::vector<std::string> alphabet = testing::cluster_alphabet();
  for (const char* extra : {" ", " ", ".", "x", "ii", "ẽ", "ã", "ũ", "ꝗ", "ð", "ꝛ"})
    alphabet.push_back(extra);
  for (int n = 0; n < 500; ++n) {
    std::string text;
    for (std::size_t k = rng.between(0, 40); k > 0; --k) text += rng.pick(alphabet);
    text = unicode::nfc(text);
    const auto lt = apply_transform(text, r, false);
    REQUIRE(reconstruct_source(lt) == text);
    // segments tile both strings
    std::size_t s = 0, t = 0;
    for (const auto& seg : lt.offset_map) {
      CHECK(seg.source.begin == s);
      CHECK(seg.target.begin == t);
      s = seg.source.end;
      t = seg.target.end;
    }
    CHECK(s == unicode::segment_graphemes(text).size());
    CHECK(t == unicode::segment_graphemes(lt.derived).size());
  }
}

TEST_CASE("layers JSONL") {
  const auto r = example_rules();
  const auto lt = apply_transform("q̄ deuſ", r, false);
  const auto text = layers_to_jsonl("doc", {lt}, r);
  const auto j = nlohmann::json::parse(text.substr(0, text.find('\n')));
  CHECK(j["id"] == "doc");
  CHECK(j["diplomatic"] == "q̄ deuſ");
  CHECK(j["derived"] == "quod deus");
  CHECK(j["layer"] == "normalised");
  CHECK(j["offset_map"].is_array());
  CHECK(j["offset_map"][0]["source_text"] == "q̄");
}
