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
#include <string>
#include <string_view>
#include <vector>

#include "scriptorium/ingest.hpp"

namespace scriptorium {

enum class EditUnit { Grapheme, Codepoint };
std::string_view to_string(EditUnit u);
EditUnit edit_unit_from_string(std::string_view name);

enum class EditKind { Match, Substitute, Insert, Delete };

struct EditOp {
  EditKind kind;
  std::size_t ref_pos;  // index into the reference units (position for inserts)
  std::size_t hyp_pos;  // index into the hypothesis units (position for deletes)
};

struct EditScript {
  std::vector<EditOp> ops;
  std::size_t distance = 0;
  EditUnit unit = EditUnit::Grapheme;
};

// Units of a string: NFC grapheme clusters or NFC codepoints.
std::vector<std::string> edit_units(std::string_view text, EditUnit unit);

// Unit-cost Levenshtein with traceback. Equal-cost ties prefer
// match > substitute > delete > insert.
EditScript edit_script(std::string_view reference, std::string_view hypothesis, EditUnit unit = EditUnit::Grapheme);
EditScript edit_script(const std::vector<std::string>& reference, const std::vector<std::string>& hypothesis,
                       EditUnit unit = EditUnit::Grapheme);

// Distance without traceback (two-row DP).
std::size_t edit_distance(const std::vector<std::string>& reference, const std::vector<std::string>& hypothesis);

// Applies the script to the reference units; yields the hypothesis units.
std::vector<std::string> replay(const EditScript& script, const std::vector<std::string>& reference,
                                const std::vector<std::string>& hypothesis);

// Collapses every whitespace run to one ASCII space and trims the ends.
std::string collapse_whitespace(std::string_view text);

struct DocumentPair {
  std::string id;
  Document reference;
  Document hypothesis;
};

struct ErrorRateRow {
  std::string id;
  std::size_t ref_length = 0;  // units
  std::size_t distance = 0;
  std::size_t ref_words = 0;
  std::size_t word_distance = 0;
  double cer_pct = 0.0;
  double wer_pct = 0.0;
};

struct ErrorRateReport {
  std::vector<ErrorRateRow> rows;
  ErrorRateRow corpus;  // micro-averaged, id "corpus"
  EditUnit unit = EditUnit::Grapheme;
  std::vector<std::string> warnings;
};

// Lines are compared pairwise when counts agree, otherwise each document is
// concatenated (with a warning). Throws EmptyReference.
ErrorRateReport error_rates(const std::vector<DocumentPair>& pairs, EditUnit unit = EditUnit::Grapheme);

// CSV: id,ref_graphemes,distance,cer_pct,wer_pct plus a final corpus row.
std::string error_report_csv(const ErrorRateReport& report);

}  // namespace scriptorium
