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

#include "scriptorium/align.hpp"
#include "scriptorium/csv.hpp"
#include "scriptorium/errors.hpp"
#include "scriptorium/ingest.hpp"
#include "scriptorium/layers.hpp"
#include "support/oracles.hpp"
#include "support/testing.hpp"

using namespace scriptorium;
using scriptorium::testing::Rng;

namespace {

ReferenceText verse(const ReferenceText& all, const std::string& chapter, const std::string& v) {
  ReferenceText out{all.label, {}};
  for (const auto& u : all.units)
    if (u.key.chapter == chapter && u.key.verse == v) out.units.push_back(u);
  return out;
}

CollationResult collate_fixture(const std::string& file, const std::string& chapter, const std::string& v) {
  const auto rules = parse_transform_rules(testing::slurp(testing::fixture("genesis/rules.tsv")));
  const auto ref = load_reference(testing::slurp(testing::fixture("genesis/vulgate_genesis.tsv")));
  const auto doc = parse_plaintext(testing::slurp(testing::fixture("genesis/" + file)), file);
  return collate(derive_layer(doc, rules, Layer::Normalised), verse(ref, chapter, v));
}

std::vector<std::string> random_tokens(Rng& rng, std::size_t max_len) {
  static const std::vector<std::string> vocab = {"et", "est", "in", "quod", "quid", "non", "nos", "deus", "deum",
                                                 "terra", "terram", "a", "ab"};
  std::vector<std::string> out(rng.between(0, max_len));
  for (auto& t : out) t = rng.pick(vocab);
  return out;
}

}  // namespace

TEST_CASE("reference loading") {
  const auto ref = load_reference(testing::slurp(testing::fixture("genesis/vulgate_genesis.tsv")), "vulgate");
  REQUIRE(ref.units.size() == 2);
  CHECK(ref.units[0].key.label() == "Gen 9:15");
  CHECK(ref.units[0].tokens.front() == "et");
  CHECK(ref.units[0].tokens[4] == "vobiscum");  // comma stripped
  CHECK(ref.token_units().back() == 1);
  CHECK(load_reference("Gen 1 1 in principio creavit\n").units[0].tokens.size() == 3);
  CHECK_THROWS_AS(load_reference("Gen\t1\t1\ta\nGen\t1\t1\tb\n"), DuplicateVerse);
  CHECK_THROWS_AS(load_reference("Gen\n"), ParseError);
}

TEST_CASE("token similarity") {
  CHECK(token_similarity("deus", "deus") == 1.0);
  CHECK(token_similarity("deus", "deum") == doctest::Approx(0.75));
  CHECK(token_similarity("", "") == 1.0);
  CHECK(normalize_token("Carnem.") == "carnem");
}

TEST_CASE("alignment score equals the exhaustive optimum") {
  Rng rng(808);
  const AlignOptions opt;
  for (int n = 0; n < 400; ++n) {
    const auto h = random_tokens(rng, 8);
    const auto r = random_tokens(rng, 8);
    const auto ops = align_tokens(h, r, opt);
    CHECK(alignment_score(ops) ==
          doctest::Approx(testing::best_alignment_exhaustive(h, r, opt.gap_penalty, opt.substitute_threshold)));
    // every token is consumed exactly once, in order
    std::size_t hi = 0, ri = 0;
    for (const auto& op : ops) {
      if (op.kind != AlignKind::GapInHypothesis) CHECK(op.hyp == hi++);
      if (op.kind != AlignKind::GapInReference) CHECK(op.ref == ri++);
    }
    CHECK(hi == h.size());
    CHECK(ri == r.size());
  }
}

TEST_CASE("variant extraction") {
  const std::vector<std::string> ref = {"in", "principio", "creavit", "deus"};
  SUBCASE("insertion") {
    const auto v = extract_variants(align_tokens({"in", "principio", "bene", "creavit", "deus"}, ref));
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == VariantKind::Insertion);
    CHECK(v[0].hyp_begin == 2);
    CHECK(v[0].hyp_end == 3);
  }
  SUBCASE("omission") {
    const auto v = extract_variants(align_tokens({"in", "creavit", "deus"}, ref));
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == VariantKind::Omission);
    CHECK(v[0].ref_begin == 1);
  }
  SUBCASE("substitution") {
    const auto v = extract_variants(align_tokens({"in", "principio", "creavit", "deum"}, ref));
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == VariantKind::Substitution);
  }
  SUBCASE("merge gap joins nearby edits") {
    const auto ops = align_tokens({"x", "in", "y", "principio", "creavit", "deus"}, ref);
    CHECK(extract_variants(ops, 0).size() == 2);
    CHECK(extract_variants(ops, 1).size() == 1);
  }
  CHECK(extract_variants(align_tokens(ref, ref)).empty());
}

TEST_CASE("Gen 9:15: one insertion, quod pepigi") {
  const auto r = collate_fixture("gen_9_15.txt", "9", "15");
  REQUIRE(r.variants.size() == 1);
  const auto& v = r.variants[0];
  CHECK(v.kind == VariantKind::Insertion);
  CHECK(v.normalised == "quod pepigi");
  CHECK(v.diplomatic == "q̄ pepigi");
  CHECK(v.verse.label() == "Gen 9:15");
  CHECK(v.reference_context.find("[]") != std::string::npos);
  CHECK(r.anchors > 0);
}

TEST_CASE("Gen 17:20: one insertion, crescere") {
  const auto r = collate_fixture("gen_17_20.txt", "17", "20");
  REQUIRE(r.variants.size() == 1);
  CHECK(r.variants[0].kind == VariantKind::Insertion);
  CHECK(r.variants[0].normalised == "crescere");
  CHECK(r.variants[0].diplomatic == "creſcere");
}

TEST_CASE("verses outside the witness are not omissions") {
  const auto rules = parse_transform_rules(testing::slurp(testing::fixture("genesis/rules.tsv")));
  const auto ref = load_reference(testing::slurp(testing::fixture("genesis/vulgate_genesis.tsv")));
  for (const char* file : {"gen_9_15.txt", "gen_17_20.txt"}) {
    const auto doc = parse_plaintext(testing::slurp(testing::fixture(std::string("genesis/") + file)), file);
    const auto r = collate(derive_layer(doc, rules, Layer::Normalised), ref);
    CHECK(r.units_outside == 1);
    REQUIRE(r.variants.size() == 1);
    CHECK(r.variants[0].kind == VariantKind::Insertion);
  }
  // a partial verse missing at the end is still an omission
  Document cut{"cut", {{"duodecim duces generabit et faciam illum in", std::nullopt, std::nullopt}}, {},
               SourceFormat::Plain};
  const auto r = collate(derive_layer(cut, rules, Layer::Normalised), verse(ref, "17", "20"));
  REQUIRE(r.variants.size() == 1);
  CHECK(r.variants[0].kind == VariantKind::Omission);
  CHECK(r.variants[0].reference == "gentem magnam");
}

TEST_CASE("anchored alignment agrees with the full DP on short inputs") {
  Rng rng(31);
  for (int n = 0; n < 200; ++n) {
    const auto h = random_tokens(rng, 8);
    const auto r = random_tokens(rng, 8);
    CHECK(alignment_score(anchored_align(h, r, {})) <= doctest::Approx(alignment_score(align_tokens(h, r))));
  }
}

TEST_CASE("exports") {
  const auto r = collate_fixture("gen_9_15.txt", "9", "15");
  const auto table = csv::parse(variants_csv("g", r.variants));
  CHECK(table.header.front() == "id");
  REQUIRE(table.rows.size() == 1);
  CHECK(table.rows[0][4] == "insertion");
  const auto j = nlohmann::json::parse(variants_json("g", r.variants));
  CHECK(j[0]["normalised"] == "quod pepigi");
}
