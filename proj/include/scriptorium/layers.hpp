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

// Derived transcription layers. A ruleset of abbreviation expansions and
// letterform mappings is applied in one left-to-right pass over grapheme
// clusters; every replacement is recorded in an offset map so the diplomatic
// text can always be recovered.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "scriptorium/ingest.hpp"

namespace scriptorium {

enum class RuleKind { Expand, Letterform };
enum class RuleContext { Anywhere, WordFinal, WordInitial };
enum class Layer { Diplomatic, SemiDiplomatic, Normalised };

std::string_view to_string(RuleKind k);
std::string_view to_string(RuleContext c);
std::string_view to_string(Layer l);
Layer layer_from_string(std::string_view name);  // throws std::invalid_argument

struct TransformRule {
  RuleKind kind = RuleKind::Expand;
  std::vector<std::string> pattern;  // grapheme clusters (NFC)
  std::string replacement;
  RuleContext context = RuleContext::Anywhere;
  int priority = 0;                  // larger fires first
  std::size_t source_line = 0;
};

class TransformRuleSet {
 public:
  TransformRuleSet() = default;
  // Throws DuplicateRule on a repeated (kind, pattern, context) and
  // std::invalid_argument on an ill-formed rule.
  TransformRuleSet(std::string name, std::string version, std::vector<TransformRule> rules);

  const std::string& name() const noexcept { return name_; }
  const std::string& version() const noexcept { return version_; }
  const std::vector<TransformRule>& rules() const noexcept { return rules_; }
  bool empty() const noexcept { return rules_.empty(); }

  // Rule indices in firing order: priority desc, pattern length desc,
  // declaration order.
  const std::vector<std::size_t>& firing_order() const noexcept { return order_; }

 private:
  std::string name_;
  std::string version_;
  std::vector<TransformRule> rules_;
  std::vector<std::size_t> order_;
};

// Rules file: `kind<TAB>pattern<TAB>context<TAB>replacement<TAB>priority`,
// '#' comments, `#@name` / `#@version` directives. Escapes as in policy files.
TransformRuleSet parse_transform_rules(std::string_view source);

struct Span {
  std::size_t begin = 0;  // grapheme offsets
  std::size_t end = 0;
  bool operator==(const Span&) const = default;
};

struct Segment {
  Span source;
  Span target;
  std::vector<std::size_t> rules;  // empty = identity; otherwise rule indices applied
  std::string source_text;         // diplomatic text of the source span
  bool marked = false;             // expansion flagged for display

  bool identity() const noexcept { return rules.empty(); }
};

struct LayeredText {
  std::string diplomatic;
  std::string derived;
  Layer layer = Layer::Normalised;
  std::vector<Segment> offset_map;
  bool expansions_marked = false;
  // Derived cluster indices still carrying a combining mark inside identity
  // segments: abbreviations no rule expanded.
  std::vector<std::size_t> unexpanded;
};

// Selects which rule kinds fire.
struct ApplyOptions {
  bool expand = true;
  bool letterform = true;
  bool mark = false;
};

// One pass, non-recursive: replacement output is never re-matched.
LayeredText apply_transform(std::string_view text, const TransformRuleSet& rules, bool mark);
LayeredText apply_transform(std::string_view text, const TransformRuleSet& rules, const ApplyOptions& options);

struct DerivedDocument {
  Document document;                // same id/metadata, lines hold the derived text
  std::vector<LayeredText> lines;
};

// Semi-diplomatic: expansions only, marked. Normalised: expansions (unmarked)
// then letterform mappings, composed into one offset map.
DerivedDocument derive_layer(const Document& doc, const TransformRuleSet& rules, Layer target);

// Rebuilds the diplomatic text from the derived text and offset map.
std::string reconstruct_source(const LayeredText& layered);

// Source grapheme span covered by a target grapheme span.
Span source_span_for(const LayeredText& layered, Span target);

std::string layers_to_jsonl(const std::string& doc_id, const std::vector<LayeredText>& lines,
                            const TransformRuleSet& rules);

}  // namespace scriptorium
