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

#include <set>

#include "scriptorium/errors.hpp"
#include "scriptorium/policy.hpp"
#include "scriptorium/unicode.hpp"
#include "support/testing.hpp"

using namespace scriptorium;
using scriptorium::testing::Rng;

namespace {

CharacterPolicy example_policy() {
  return parse_policy(testing::slurp(std::filesystem::path(SCRIPTORIUM_FIXTURES) / "../../data/policy.example.tsv"));
}

std::string record(std::string_view cluster, std::string_view cls, std::string_view of = "",
                   std::string_view description = "") {
  return std::string(cluster) + "\t" + std::string(cls) + "\t" + std::string(of) + "\t" + std::string(description) +
         "\n";
}

}  // namespace

TEST_CASE("the shipped policy parses") {
  const auto p = example_policy();
  CHECK(p.size() == 40);
  CHECK(p.name() == "Paris Bible, diplomatic");
  CHECK(p.version() == "1.0");
  REQUIRE(p.find("ſ") != nullptr);
  CHECK(p.find("ſ")->letterform_of == "s");
  CHECK(p.find("ſ")->grapheme_class == GraphemeClass::SpecialLetterform);
}

TEST_CASE("membership composes bases with authorised marks") {
  const auto p = example_policy();
  CHECK(p.authorizes("e"));
  CHECK(p.authorizes("\u0113"));        // precomposed e + macron
  CHECK(p.authorizes("e\u0304"));       // decomposed
  CHECK(p.authorizes("q\u0304"));       // no precomposed form
  CHECK(p.authorizes("\u00F1"));        // n + tilde
  CHECK_FALSE(p.authorizes("E"));       // capitals are not declared
  CHECK_FALSE(p.authorizes("\u00EB"));  // diaeresis is not declared
  CHECK_FALSE(p.authorizes(""));
  CHECK_FALSE(p.authorizes("\u00E6"));
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_policy("#@name\tempty\n"), EmptyPolicy);
  CHECK_THROWS_AS(parse_policy(record("ab", "base-letter")), ParseError);
  CHECK_THROWS_AS(parse_policy(record("a", "vowel")), ParseError);
  CHECK_THROWS_AS(parse_policy("a\n"), ParseError);
  CHECK_THROWS_AS(parse_policy(record("U+0304", "base-letter") + record("a", "combining-mark")), ParseError);
  try {
    parse_policy("#@name\tx\n" + record("U+0113", "base-letter") + record("e+U+0304", "base-letter"));
    FAIL("expected DuplicateEntry");
  } catch (const DuplicateEntry& e) {
    CHECK(e.lines() == std::vector<std::size_t>{2, 3});
  }
  try {
    parse_policy(record("a", "base-letter") + record("b", "bogus"));
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.where().line == 2);
  }
}

TEST_CASE("serialize and parse round-trip") {
  const auto p = example_policy();
  CHECK(parse_policy(serialize_policy(p)) == p);

  // Property: any non-empty subset survives a round-trip.
  Rng rng(5);
  for (int n = 0; n < 100; ++n) {
    std::vector<GraphemeEntry> subset;
    for (const auto& e : p.entries())
      if (rng.chance(0.4)) subset.push_back(e);
    if (subset.empty()) subset.push_back(p.entries().front());
    const CharacterPolicy q("subset " + std::to_string(n), "1", subset, "note one\nnote two");
    CHECK(parse_policy(serialize_policy(q)) == q);
  }
}

TEST_CASE("validation reports every unauthorised cluster with its position") {
  const auto p = example_policy();
  const auto r = validate_text("in principio\ncrea\u0304uit \u00F0eu\u017F cel\u016B 7 terram\nDixit \u00E6", p);
  REQUIRE(r.violations.size() == 2);
  CHECK(r.violations[0].line == 2);
  CHECK(r.violations[0].grapheme == 0);
  CHECK(r.violations[0].cluster == "D");
  CHECK(r.violations[1].line == 2);
  CHECK(r.violations[1].grapheme == 6);
  CHECK(r.violations[1].reason == "unauthorized cluster");
  CHECK(validate_text("", p).clean());

  // Property: injected clusters are found exactly, nothing else is.
  Rng rng(9);
  const std::vector<std::string> allowed = {"a", "e", "i", "\u017F", "7", "\u0113", "q\u0304", " ", "."};
  const std::vector<std::string> foreign = {"A", "\u00E6", "\uE5B8", "\u00EB", "&", "x\u0323"};
  for (int n = 0; n < 50; ++n) {
    std::vector<std::string> lines;
    std::set<std::pair<std::size_t, std::size_t>> injected;
    for (std::size_t l = 0; l < 5; ++l) {
      std::string line;
      for (std::size_t g = rng.between(1, 30), k = 0; k < g; ++k) {
        if (rng.chance(0.05)) {
          line += rng.pick(foreign);
          injected.insert({l, k});
        } else {
          line += rng.pick(allowed);
        }
      }
      lines.push_back(line);
    }
    const auto report = validate_lines(lines, p);
    std::set<std::pair<std::size_t, std::size_t>> found;
    for (const auto& v : report.violations) found.insert({v.line, v.grapheme});
    CHECK(found == injected);
    CHECK(report.violations.size() == injected.size());
  }
}

TEST_CASE("validation never repairs and rejects bad encodings") {
  const auto p = example_policy();
  CHECK_THROWS_AS(validate_text("ab\xFF", p), EncodingError);
}

TEST_CASE("NLP-safety audit") {
  SUBCASE("the shipped policy: long s folds onto s") {
    const auto findings = audit_nlp_safety(example_policy());
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].kind == AuditKind::LowercaseCollision);
    CHECK(findings[0].subject == std::vector<std::string>{"s", "\u017F"});
    CHECK(unicode::case_fold(findings[0].subject[0]) == unicode::case_fold(findings[0].subject[1]));
  }

  SUBCASE("one finding per hazard") {
    const auto p = parse_policy(record("a", "base-letter") + record("d", "base-letter") + record("D", "base-letter") +
                                record("U+E5B8", "special-letterform", "", "MUFI private-use form") +
                                record("U+2019", "punctuation", "", "apostrophe"));
    const auto findings = audit_nlp_safety(p);
    REQUIRE(findings.size() == 3);
    std::set<AuditKind> kinds;
    for (const auto& f : findings) kinds.insert(f.kind);
    CHECK(kinds == std::set<AuditKind>{AuditKind::PrivateUseCodepoint, AuditKind::LowercaseCollision,
                                        AuditKind::DelimiterConflict});
    for (const auto& f : findings) {
      CHECK_FALSE(f.explanation.empty());
      if (f.kind == AuditKind::LowercaseCollision) CHECK(f.subject == std::vector<std::string>{"d", "D"});
    }
  }

  SUBCASE("non-NFC entries are unstable") {
    const auto p = parse_policy(record("e+U+0304", "base-letter"));
    const auto findings = audit_nlp_safety(p);
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].kind == AuditKind::NormalizationInstability);
  }

  SUBCASE("declared space is not a delimiter conflict") {
    CHECK(audit_nlp_safety(parse_policy(record("U+0020", "space"))).empty());
  }
}

TEST_CASE("transcription statement") {
  TranscriptionStatement st;
  st.policy = example_policy();
  st.model_history = parse_model_history(testing::slurp(testing::fixture("model_history.tsv")));
  st.corpus.document_count = 2;
  st.corpus.shelfmarks = {"LAD 2013/051", "BnF lat. 15"};
  const auto md = emit_statement(st);

  CHECK(md.find("## Character inventory") != std::string::npos);
  CHECK(md.find("| U+017F |") != std::string::npos);
  CHECK(md.find("| \u25CC\u0304 | U+0304 | combining-mark |") != std::string::npos);
  REQUIRE(st.model_history.size() == 5);
  CHECK(md.find("| LAD1.3 | Gothic books - Hodel | 30 | 9 | 2516 | 15258 | 0.51 | 3.01 |") != std::string::npos);
  CHECK(md.find("| LAD1.1 | LAD1.0 | 19 | 5 | 1592 | 9632 | 11.89 | 7.20 |") != std::string::npos);
  CHECK(md.find("- LAD 2013/051") != std::string::npos);

  st.model_history.clear();
  CHECK(emit_statement(st).find("No models have been trained on this corpus.") != std::string::npos);

  st.model_history.push_back({"bad", "x", 1, 1, 1, 1, 120.0, 1.0, ""});
  CHECK_THROWS_AS(emit_statement(st), std::invalid_argument);
}
