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

// Token-level collation of a transcription against a verse-structured
// reference text, and extraction of the variant readings it implies.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "scriptorium/layers.hpp"

namespace scriptorium {

struct VerseKey {
  std::string book;
  std::string chapter;
  std::string verse;
  bool operator==(const VerseKey&) const = default;
  std::string label() const { return book + " " + chapter + ":" + verse; }
};

struct ReferenceUnit {
  VerseKey key;
  std::vector<std::string> tokens;  // lowercase, punctuation stripped
};

struct ReferenceText {
  std::string label;
  std::vector<ReferenceUnit> units;

  std::vector<std::string> flat_tokens() const;
  // Unit index of each flat token.
  std::vector<std::size_t> token_units() const;
};

// Lines `book<TAB>chapter<TAB>verse<TAB>text`; lines without tabs may use
// single spaces between the first three fields. Throws ParseError,
// DuplicateVerse.
ReferenceText load_reference(std::string_view source, std::string label = "reference");

// Lowercase and drop punctuation codepoints.
std::string normalize_token(std::string_view token);

// 1 - grapheme edit distance / max length (1 when both are empty).
double token_similarity(std::string_view a, std::string_view b);

enum class AlignKind { Match, Substitute, GapInReference, GapInHypothesis };
std::string_view to_string(AlignKind k);

struct AlignmentOp {
  AlignKind kind;
  std::size_t hyp;  // hypothesis token index (insertion point for gap-in-hypothesis)
  std::size_t ref;  // reference token index (insertion point for gap-in-reference)
  double score;
};

struct AlignOptions {
  double gap_penalty = -0.5;
  double substitute_threshold = 0.5;  // pairs below this never align
};

// Global alignment maximizing the summed scores; ties prefer
// match > substitute > gap-in-hypothesis > gap-in-reference.
std::vector<AlignmentOp> align_tokens(const std::vector<std::string>& hypothesis,
                                      const std::vector<std::string>& reference, const AlignOptions& options = {});

double alignment_score(const std::vector<AlignmentOp>& ops);

enum class VariantKind { Insertion, Omission, Substitution };
std::string_view to_string(VariantKind k);

struct VariantReading {
  VariantKind kind;
  std::size_t hyp_begin = 0, hyp_end = 0;  // hypothesis token span (may be empty)
  std::size_t ref_begin = 0, ref_end = 0;  // reference token span (may be empty)
  std::size_t first_op = 0, last_op = 0;   // inclusive op range
  std::string diplomatic;                  // filled by annotate_variants
  std::string normalised;
  std::string reference;                   // reference tokens of the span
  VerseKey verse;
  std::string reference_context;
};

// Maximal runs of non-match ops, tolerating up to merge_gap intervening
// matches, each become one reading.
std::vector<VariantReading> extract_variants(const std::vector<AlignmentOp>& ops, std::size_t merge_gap = 1);

struct HypothesisToken {
  std::string normalised;  // as aligned
  std::string surface;     // derived-layer surface
  std::string diplomatic;  // diplomatic surface via the offset map
  std::size_t line = 0;
};

// Fills surfaces, verse key and reference context from token tables.
void annotate_variants(std::vector<VariantReading>& readings, const std::vector<HypothesisToken>& hypothesis,
                       const ReferenceText& reference, std::size_t context_tokens = 3);

// Normalised-layer tokens of a derived document, with their diplomatic
// surfaces. Tokens that normalise to nothing are dropped.
std::vector<HypothesisToken> hypothesis_tokens(const DerivedDocument& derived);

struct CollationResult {
  std::vector<HypothesisToken> hypothesis;
  std::vector<AlignmentOp> ops;
  std::vector<VariantReading> variants;
  std::size_t anchors = 0;
  std::size_t units_outside = 0;  // whole reference units before/after the witness
};

// Anchors on 3-token exact matches unique to both sides, then aligns each
// window between consecutive anchors globally.
CollationResult collate(const DerivedDocument& derived, const ReferenceText& reference, std::size_t merge_gap = 1,
                        const AlignOptions& options = {});
std::vector<AlignmentOp> anchored_align(const std::vector<std::string>& hypothesis,
                                        const std::vector<std::string>& reference, const AlignOptions& options,
                                        std::size_t* anchor_count = nullptr);

std::string variants_csv(const std::string& doc_id, const std::vector<VariantReading>& variants);
std::string variants_json(const std::string& doc_id, const std::vector<VariantReading>& variants);

}  // namespace scriptorium
