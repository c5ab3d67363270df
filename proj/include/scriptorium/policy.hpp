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

// Character policies: the authorised grapheme inventory of a corpus, the
// validator that gates ground truth against it, the NLP-safety audit, and the
// markdown "transcription statement" that publishes it.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace scriptorium {

enum class GraphemeClass {
  BaseLetter,
  SpecialLetterform,
  CombiningMark,
  SuperscriptLetter,
  Punctuation,
  Numeral,
  Space,
};

std::string_view to_string(GraphemeClass c);
std::optional<GraphemeClass> grapheme_class_from_string(std::string_view name);

struct GraphemeEntry {
  std::string cluster;                  // as declared (not renormalised)
  GraphemeClass grapheme_class = GraphemeClass::BaseLetter;
  std::string letterform_of;            // empty when not a variant
  std::string description;
  std::size_t source_line = 0;          // 0 for programmatically built entries

  bool operator==(const GraphemeEntry& o) const {
    return cluster == o.cluster && grapheme_class == o.grapheme_class && letterform_of == o.letterform_of &&
           description == o.description;
  }
};

class CharacterPolicy {
 public:
  CharacterPolicy() = default;
  // Throws DuplicateEntry when two entries coincide after NFC, EmptyPolicy
  // when entries is empty.
  CharacterPolicy(std::string name, std::string version, std::vector<GraphemeEntry> entries, std::string notes = {});

  const std::string& name() const noexcept { return name_; }
  const std::string& version() const noexcept { return version_; }
  const std::string& notes() const noexcept { return notes_; }
  const std::vector<GraphemeEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

  // The entry whose NFC form equals nfc(cluster), if any.
  const GraphemeEntry* find(std::string_view cluster) const;

  // True when the NFC cluster is an entry, or decomposes into an authorised
  // base followed only by authorised combining marks (so "e" + U+0304,
  // composed to U+0113, is covered by {e, U+0304}).
  bool authorizes(std::string_view cluster) const;

  bool operator==(const CharacterPolicy& o) const {
    return name_ == o.name_ && version_ == o.version_ && notes_ == o.notes_ && entries_ == o.entries_;
  }

 private:
  std::string name_;
  std::string version_;
  std::string notes_;
  std::vector<GraphemeEntry> entries_;
  std::unordered_map<std::string, std::size_t> by_nfc_;
};

// Policy file: `cluster<TAB>class<TAB>letterform_of<TAB>description` records,
// '#' comments, and `#@name`, `#@version`, `#@notes` directive lines.
CharacterPolicy parse_policy(std::string_view source);
std::string serialize_policy(const CharacterPolicy& policy);

struct Violation {
  std::size_t line = 0;       // 0-based line index
  std::size_t grapheme = 0;   // 0-based cluster index within the line
  std::string cluster;
  std::string reason;
};

struct ViolationReport {
  std::vector<Violation> violations;
  std::size_t total_graphemes = 0;
  bool clean() const noexcept { return violations.empty(); }
};

// Lines are split on '\n'; every cluster not authorised by the policy yields
// exactly one violation. Never repairs.
ViolationReport validate_text(std::string_view text, const CharacterPolicy& policy);
// Validates pre-split lines (document lines), keeping their indices.
ViolationReport validate_lines(const std::vector<std::string>& lines, const CharacterPolicy& policy);

enum class AuditKind { PrivateUseCodepoint, LowercaseCollision, DelimiterConflict, NormalizationInstability };
std::string_view to_string(AuditKind k);

struct AuditFinding {
  AuditKind kind;
  std::vector<std::string> subject;   // implicated entry clusters
  std::string explanation;
};

std::vector<AuditFinding> audit_nlp_safety(const CharacterPolicy& policy);

struct ModelHistoryRow {
  std::string name;
  std::string base;
  long train_pages = 0;
  long validation_pages = 0;
  long lines = 0;
  long words = 0;
  double cer_train = 0.0;       // percent
  double cer_validation = 0.0;  // percent
  std::string comments;
};

struct CorpusSummary {
  std::size_t document_count = 0;
  std::vector<std::string> shelfmarks;
};

struct TranscriptionStatement {
  CharacterPolicy policy;
  CorpusSummary corpus;
  std::vector<ModelHistoryRow> model_history;
  std::string principles_text;
};

// Throws std::invalid_argument when a row has negative counts or a CER
// outside [0, 100].
std::string emit_statement(const TranscriptionStatement& statement);

// Model-history TSV: name, base, train pages, validation pages, lines, words,
// CER-train, CER-validation, comments. '#' comments allowed.
std::vector<ModelHistoryRow> parse_model_history(std::string_view source);

}  // namespace scriptorium
