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

#include "scriptorium/policy.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include "scriptorium/errors.hpp"
#include "scriptorium/unicode.hpp"
#include "util.hpp"

namespace scriptorium {
namespace {

constexpr std::pair<GraphemeClass, std::string_view> kClassNames[] = {
    {GraphemeClass::BaseLetter, "base-letter"},
    {GraphemeClass::SpecialLetterform, "special-letterform"},
    {GraphemeClass::CombiningMark, "combining-mark"},
    {GraphemeClass::SuperscriptLetter, "superscript-letter"},
    {GraphemeClass::Punctuation, "punctuation"},
    {GraphemeClass::Numeral, "numeral"},
    {GraphemeClass::Space, "space"},
};

bool is_mark_class(GraphemeClass c) {
  return c == GraphemeClass::CombiningMark || c == GraphemeClass::SuperscriptLetter;
}

bool all_combining(std::string_view cluster) {
  auto cps = unicode::decode(cluster);
  return !cps.empty() && std::all_of(cps.begin(), cps.end(), unicode::is_combining);
}

// Returns an empty string when the entry is well-shaped, otherwise the reason.
std::string shape_problem(const GraphemeEntry& e) {
  if (e.cluster.empty()) return "empty cluster";
  if (e.grapheme_class == GraphemeClass::CombiningMark || (is_mark_class(e.grapheme_class) && all_combining(e.cluster))) {
    if (!all_combining(e.cluster)) return "combining-mark entry must consist of combining codepoints";
    if (unicode::segment_graphemes("a" + e.cluster).size() != 1)
      return "combining-mark entry does not attach to a base letter as one cluster";
    return {};
  }
  if (unicode::segment_graphemes(e.cluster).size() != 1) return "entry is not exactly one grapheme cluster";
  return {};
}

bool is_delimiter(char32_t cp) {
  switch (cp) {
    case U'\'': case U'’': case U'ʼ':                       // apostrophes
    case U'-': case U'‐': case U'‑': case U'­':          // hyphens
    case U'(': case U')': case U'[': case U']': case U'{': case U'}':
    case U'<': case U'>':
      return true;
    default:
      return unicode::is_whitespace(cp);
  }
}

std::string display_cluster(const GraphemeEntry& e) {
  std::string s;
  // dotted circle carrier so a lone combining mark is visible
  if (all_combining(e.cluster)) s = "◌";
  if (e.grapheme_class == GraphemeClass::Space) return "(space)";
  s += e.cluster;
  return s;
}

std::string md_cell(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '|') out += "\\|";
    else if (c == '\n' || c == '\r') out += ' ';
    else out.push_back(c);
  }
  return out;
}

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string_view to_string(GraphemeClass c) {
  for (auto& [k, n] : kClassNames)
    if (k == c) return n;
  return "base-letter";
}

std::optional<GraphemeClass> grapheme_class_from_string(std::string_view name) {
  for (auto& [k, n] : kClassNames)
    if (n == name) return k;
  return std::nullopt;
}

std::string_view to_string(AuditKind k) {
  switch (k) {
    case AuditKind::PrivateUseCodepoint: return "private-use-codepoint";
    case AuditKind::LowercaseCollision: return "lowercase-collision";
    case AuditKind::DelimiterConflict: return "delimiter-conflict";
    case AuditKind::NormalizationInstability: return "normalization-instability";
  }
  return "unknown";
}

CharacterPolicy::CharacterPolicy(std::string name, std::string version, std::vector<GraphemeEntry> entries,
                                 std::string notes)
    : name_(std::move(name)), version_(std::move(version)), notes_(std::move(notes)), entries_(std::move(entries)) {
  if (entries_.empty()) throw EmptyPolicy();
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (auto why = shape_problem(e); !why.empty()) throw ParseError({e.source_line, 1}, why);
    auto [it, inserted] = by_nfc_.emplace(unicode::nfc(e.cluster), i);
    if (!inserted) throw DuplicateEntry(e.cluster, {entries_[it->second].source_line, e.source_line});
  }
}

const GraphemeEntry* CharacterPolicy::find(std::string_view cluster) const {
  auto it = by_nfc_.find(unicode::nfc(cluster));
  return it == by_nfc_.end() ? nullptr : &entries_[it->second];
}

bool CharacterPolicy::authorizes(std::string_view cluster) const {
  if (find(cluster)) return true;
  const auto cps = unicode::decode(unicode::nfd(cluster));
  if (cps.size() < 2 || unicode::is_combining(cps.front())) return false;
  if (!find(unicode::encode(cps.substr(0, 1)))) return false;
  for (std::size_t k = 1; k < cps.size(); ++k) {
    const auto* mark = find(unicode::encode(cps.substr(k, 1)));
    if (!mark || !is_mark_class(mark->grapheme_class)) return false;
  }
  return true;
}

CharacterPolicy parse_policy(std::string_view source) {
  unicode::check_utf8(source);
  std::string name, version, notes;
  std::vector<GraphemeEntry> entries;
  std::map<std::string, std::size_t> seen;  // nfc cluster -> line

  const auto lines = detail::split_lines(source);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::size_t lineno = n + 1;
    const auto line = lines[n];
    if (line.substr(0, 2) == "#@") {
      auto fields = detail::split(line.substr(2), '\t');
      auto key = detail::trim(fields[0]);
      std::string value = fields.size() > 1 ? std::string(line.substr(2 + fields[0].size() + 1)) : std::string();
      if (key == "name") name = value;
      else if (key == "version") version = value;
      else if (key == "notes") notes += (notes.empty() ? "" : "\n") + value;
      else throw ParseError({lineno, 3}, "unknown directive \"" + std::string(key) + "\"");
      continue;
    }
    if (line.empty() || line.front() == '#' || detail::trim(line).empty()) continue;

    auto fields = detail::split(line, '\t');
    if (fields.size() < 2) throw ParseError({lineno, 1}, "expected cluster<TAB>class");
    GraphemeEntry e;
    e.source_line = lineno;
    std::size_t col = 0;
    std::string err;
    if (!unicode::unescape(fields[0], e.cluster, col, err)) throw ParseError({lineno, col}, err);
    if (e.cluster.empty()) throw ParseError({lineno, 1}, "empty cluster");
    const auto class_name = detail::trim(fields[1]);
    auto cls = grapheme_class_from_string(class_name);
    if (!cls) throw ParseError({lineno, fields[0].size() + 2}, "unknown class \"" + std::string(class_name) + "\"");
    e.grapheme_class = *cls;
    if (fields.size() > 2 && !fields[2].empty()) {
      if (!unicode::unescape(fields[2], e.letterform_of, col, err)) throw ParseError({lineno, col}, err);
    }
    if (fields.size() > 3) {
      // description is the remainder of the line, tabs included
      std::size_t offset = fields[0].size() + fields[1].size() + fields[2].size() + 3;
      e.description = std::string(line.substr(offset));
    }
    if (auto why = shape_problem(e); !why.empty()) throw ParseError({lineno, 1}, why);
    auto key = unicode::nfc(e.cluster);
    if (auto it = seen.find(key); it != seen.end()) throw DuplicateEntry(e.cluster, {it->second, lineno});
    seen.emplace(std::move(key), lineno);
    entries.push_back(std::move(e));
  }
  if (entries.empty()) throw EmptyPolicy();
  return CharacterPolicy(std::move(name), std::move(version), std::move(entries), std::move(notes));
}

std::string serialize_policy(const CharacterPolicy& policy) {
  std::string out;
  if (!policy.name().empty()) out += "#@name\t" + policy.name() + "\n";
  if (!policy.version().empty()) out += "#@version\t" + policy.version() + "\n";
  for (auto note : detail::split_lines(policy.notes())) out += "#@notes\t" + std::string(note) + "\n";
  for (const auto& e : policy.entries()) {
    out += unicode::escape(e.cluster);
    out += '\t';
    out += to_string(e.grapheme_class);
    out += '\t';
    if (!e.letterform_of.empty()) out += unicode::escape(e.letterform_of);
    out += '\t';
    out += e.description;
    out += '\n';
  }
  return out;
}

ViolationReport validate_lines(const std::vector<std::string>& lines, const CharacterPolicy& policy) {
  ViolationReport report;
  std::unordered_map<std::string, bool> verdicts;  // clusters repeat heavily
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const auto clusters = unicode::segment_graphemes(lines[li]);
    report.total_graphemes += clusters.size();
    for (std::size_t gi = 0; gi < clusters.size(); ++gi) {
      auto [it, fresh] = verdicts.try_emplace(clusters[gi], false);
      if (fresh) it->second = policy.authorizes(clusters[gi]);
      if (!it->second) report.violations.push_back({li, gi, clusters[gi], "unauthorized cluster"});
    }
  }
  return report;
}

ViolationReport validate_text(std::string_view text, const CharacterPolicy& policy) {
  unicode::check_utf8(text);
  std::vector<std::string> lines;
  for (auto l : detail::split(text, '\n')) lines.emplace_back(l);
  if (!lines.empty() && lines.back().empty() && lines.size() > 1) lines.pop_back();
  return validate_lines(lines, policy);
}

std::vector<AuditFinding> audit_nlp_safety(const CharacterPolicy& policy) {
  std::vector<AuditFinding> findings;
  const auto& entries = policy.entries();

  for (const auto& e : entries) {
    std::vector<std::string> labels;
    for (char32_t cp : unicode::decode(e.cluster))
      if (unicode::is_private_use(cp)) labels.push_back(unicode::codepoint_label(cp));
    if (labels.empty()) continue;
    std::string joined;
    for (auto& l : labels) joined += (joined.empty() ? "" : ", ") + l;
    findings.push_back({AuditKind::PrivateUseCodepoint, {e.cluster},
                        "entry uses private-use codepoint(s) " + joined +
                            "; these render only with specific fonts and are not portable across tools"});
  }

  std::vector<std::string> folded;
  folded.reserve(entries.size());
  for (const auto& e : entries) folded.push_back(unicode::case_fold(unicode::nfc(e.cluster)));
  for (std::size_t i = 0; i < entries.size(); ++i)
    for (std::size_t j = i + 1; j < entries.size(); ++j)
      if (folded[i] == folded[j])
        findings.push_back({AuditKind::LowercaseCollision, {entries[i].cluster, entries[j].cluster},
                            "entries " + unicode::escape(entries[i].cluster) + " and " +
                                unicode::escape(entries[j].cluster) +
                                " become identical under default case folding; lowercasing erases the distinction"});

  for (const auto& e : entries) {
    if (e.grapheme_class == GraphemeClass::Space) continue;
    auto cps = unicode::decode(e.cluster);
    if (std::none_of(cps.begin(), cps.end(), is_delimiter)) continue;
    findings.push_back({AuditKind::DelimiterConflict, {e.cluster},
                        "entry " + unicode::escape(e.cluster) + " (" + std::string(to_string(e.grapheme_class)) +
                            ") contains an apostrophe, hyphen, bracket or blank that tokenizers treat as a delimiter"});
  }

  for (const auto& e : entries) {
    if (unicode::is_nfc(e.cluster)) continue;
    findings.push_back({AuditKind::NormalizationInstability, {e.cluster},
                        "entry " + unicode::escape(e.cluster) + " changes under canonical composition to " +
                            unicode::escape(unicode::nfc(e.cluster))});
  }
  return findings;
}

std::string emit_statement(const TranscriptionStatement& statement) {
  for (const auto& row : statement.model_history) {
    if (row.train_pages < 0 || row.validation_pages < 0 || row.lines < 0 || row.words < 0)
      throw std::invalid_argument("model row \"" + row.name + "\" has a negative count");
    for (double cer : {row.cer_train, row.cer_validation})
      if (!(cer >= 0.0 && cer <= 100.0))
        throw std::invalid_argument("model row \"" + row.name + "\" has a CER outside [0, 100]");
  }

  const auto& policy = statement.policy;
  std::ostringstream md;
  md << "# Transcription statement";
  if (!policy.name().empty()) md << ": " << policy.name();
  if (!policy.version().empty()) md << " (version " << policy.version() << ")";
  md << "\n\n";

  md << "## Principles\n\n";
  if (statement.principles_text.empty()) md << "No principles text was supplied.\n\n";
  else md << statement.principles_text << (statement.principles_text.back() == '\n' ? "\n" : "\n\n");

  md << "## Character inventory\n\n";
  md << "Normalization form: NFC (canonical composition). Entries: " << policy.size() << ".\n\n";
  if (!policy.notes().empty()) md << policy.notes() << "\n\n";
  md << "| # | Cluster | Codepoints | Class | Letterform of | Description |\n";
  md << "|---|---|---|---|---|---|\n";
  std::size_t i = 0;
  for (const auto& e : policy.entries()) {
    md << "| " << ++i << " | " << md_cell(display_cluster(e)) << " | " << unicode::escape(e.cluster) << " | "
       << to_string(e.grapheme_class) << " | " << md_cell(e.letterform_of) << " | " << md_cell(e.description)
       << " |\n";
  }
  md << "\n";

  md << "## Corpus\n\n";
  md << "Documents: " << statement.corpus.document_count << "\n\n";
  if (!statement.corpus.shelfmarks.empty()) {
    md << "Manuscripts:\n\n";
    for (const auto& s : statement.corpus.shelfmarks) md << "- " << s << "\n";
    md << "\n";
  }

  md << "## Model history\n\n";
  if (statement.model_history.empty()) {
    md << "No models have been trained on this corpus.\n";
  } else {
    md << "| Model | Base | Pages (train) | Pages (val) | Lines | Words | CER-tr (%) | CER-val (%) | Comments |\n";
    md << "|---|---|---|---|---|---|---|---|---|\n";
    for (const auto& r : statement.model_history)
      md << "| " << md_cell(r.name) << " | " << md_cell(r.base) << " | " << r.train_pages << " | "
         << r.validation_pages << " | " << r.lines << " | " << r.words << " | " << pct(r.cer_train) << " | "
         << pct(r.cer_validation) << " | " << md_cell(r.comments) << " |\n";
  }
  return md.str();
}

std::vector<ModelHistoryRow> parse_model_history(std::string_view source) {
  unicode::check_utf8(source);
  std::vector<ModelHistoryRow> rows;
  const auto lines = detail::split_lines(source);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (detail::is_blank_or_comment(lines[n])) continue;
    auto f = detail::split(lines[n], '\t');
    if (f.size() < 8) throw ParseError({n + 1, 1}, "model history rows need at least 8 TAB-separated fields");
    ModelHistoryRow r;
    r.name = std::string(f[0]);
    r.base = std::string(f[1]);
    try {
      r.train_pages = std::stol(std::string(f[2]));
      r.validation_pages = std::stol(std::string(f[3]));
      r.lines = std::stol(std::string(f[4]));
      r.words = std::stol(std::string(f[5]));
      r.cer_train = std::stod(std::string(f[6]));
      r.cer_validation = std::stod(std::string(f[7]));
    } catch (const std::logic_error&) {
      throw ParseError({n + 1, 1}, "non-numeric model history field");
    }
    if (f.size() > 8) r.comments = std::string(f[8]);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace scriptorium
