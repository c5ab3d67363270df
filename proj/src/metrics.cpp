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

#include "scriptorium/metrics.hpp"

#include <algorithm>
#include <stdexcept>

#include "scriptorium/csv.hpp"
#include "scriptorium/errors.hpp"
#include "scriptorium/unicode.hpp"
#include "util.hpp"

namespace scriptorium {
namespace {

std::vector<std::string> words_of(std::string_view collapsed) {
  std::vector<std::string> words;
  if (collapsed.empty()) return words;
  for (auto w : detail::split(collapsed, ' ')) words.emplace_back(w);
  return words;
}

struct Counts {
  std::size_t ref_units = 0;
  std::size_t distance = 0;
  std::size_t ref_words = 0;
  std::size_t word_distance = 0;
};

void accumulate(Counts& c, const std::string& ref_line, const std::string& hyp_line, EditUnit unit) {
  const auto ref = collapse_whitespace(ref_line);
  const auto hyp = collapse_whitespace(hyp_line);
  const auto ru = edit_units(ref, unit);
  c.ref_units += ru.size();
  c.distance += edit_distance(ru, edit_units(hyp, unit));
  const auto rw = words_of(ref);
  c.ref_words += rw.size();
  c.word_distance += edit_distance(rw, words_of(hyp));
}

double rate(std::size_t distance, std::size_t length) {
  return length == 0 ? 0.0 : 100.0 * static_cast<double>(distance) / static_cast<double>(length);
}

std::string joined_text(const Document& doc) {
  std::string s;
  for (const auto& l : doc.lines) {
    if (!s.empty()) s.push_back(' ');
    s += l.text;
  }
  return s;
}

}  // namespace

std::string_view to_string(EditUnit u) { return u == EditUnit::Grapheme ? "grapheme" : "codepoint"; }

EditUnit edit_unit_from_string(std::string_view name) {
  if (name == "grapheme") return EditUnit::Grapheme;
  if (name == "codepoint") return EditUnit::Codepoint;
  throw std::invalid_argument("unknown unit \"" + std::string(name) + "\"");
}

std::vector<std::string> edit_units(std::string_view text, EditUnit unit) {
  if (unit == EditUnit::Grapheme) return unicode::segment_graphemes(text);
  std::vector<std::string> units;
  for (char32_t cp : unicode::decode(unicode::nfc(text))) units.push_back(unicode::encode(std::u32string(1, cp)));
  return units;
}

EditScript edit_script(std::string_view reference, std::string_view hypothesis, EditUnit unit) {
  return edit_script(edit_units(reference, unit), edit_units(hypothesis, unit), unit);
}

EditScript edit_script(const std::vector<std::string>& ref, const std::vector<std::string>& hyp, EditUnit unit) {
  const std::size_t n = ref.size();
  const std::size_t m = hyp.size();
  std::vector<std::size_t> d((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return d[i * (m + 1) + j]; };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = i;
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = j;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= m; ++j)
      at(i, j) = std::min({at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1), at(i - 1, j) + 1, at(i, j - 1) + 1});

  EditScript script;
  script.unit = unit;
  script.distance = at(n, m);
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    const std::size_t here = at(i, j);
    if (i > 0 && j > 0 && ref[i - 1] == hyp[j - 1] && at(i - 1, j - 1) == here) {
      script.ops.push_back({EditKind::Match, i - 1, j - 1});
      --i, --j;
    } else if (i > 0 && j > 0 && at(i - 1, j - 1) + 1 == here) {
      script.ops.push_back({EditKind::Substitute, i - 1, j - 1});
      --i, --j;
    } else if (i > 0 && at(i - 1, j) + 1 == here) {
      script.ops.push_back({EditKind::Delete, i - 1, j});
      --i;
    } else {
      script.ops.push_back({EditKind::Insert, i, j - 1});
      --j;
    }
  }
  std::reverse(script.ops.begin(), script.ops.end());
  return script;
}

std::size_t edit_distance(const std::vector<std::string>& ref, const std::vector<std::string>& hyp) {
  std::vector<std::size_t> prev(hyp.size() + 1), cur(hyp.size() + 1);
  for (std::size_t j = 0; j <= hyp.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= ref.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= hyp.size(); ++j)
      cur[j] = std::min({prev[j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1), prev[j] + 1, cur[j - 1] + 1});
    std::swap(prev, cur);
  }
  return prev[hyp.size()];
}

std::vector<std::string> replay(const EditScript& script, const std::vector<std::string>& reference,
                                const std::vector<std::string>& hypothesis) {
  std::vector<std::string> out;
  for (const auto& op : script.ops) {
    switch (op.kind) {
      case EditKind::Match: out.push_back(reference.at(op.ref_pos)); break;
      case EditKind::Substitute:
      case EditKind::Insert: out.push_back(hypothesis.at(op.hyp_pos)); break;
      case EditKind::Delete: break;
    }
  }
  return out;
}

std::string collapse_whitespace(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (char32_t cp : unicode::decode(text)) {
    if (unicode::is_whitespace(cp)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    unicode::append(out, cp);
  }
  return out;
}

ErrorRateReport error_rates(const std::vector<DocumentPair>& pairs, EditUnit unit) {
  ErrorRateReport report;
  report.unit = unit;
  Counts total;
  for (const auto& p : pairs) {
    Counts c;
    const auto& ref = p.reference.lines;
    const auto& hyp = p.hypothesis.lines;
    if (ref.size() == hyp.size()) {
      for (std::size_t i = 0; i < ref.size(); ++i) accumulate(c, ref[i].text, hyp[i].text, unit);
    } else {
      report.warnings.push_back(p.id + ": reference has " + std::to_string(ref.size()) + " lines, hypothesis has " +
                                std::to_string(hyp.size()) + "; comparing concatenated text");
      accumulate(c, joined_text(p.reference), joined_text(p.hypothesis), unit);
    }
    if (c.ref_units == 0) throw EmptyReference(p.id);
    ErrorRateRow row{p.id, c.ref_units, c.distance, c.ref_words, c.word_distance, rate(c.distance, c.ref_units),
                     rate(c.word_distance, c.ref_words)};
    report.rows.push_back(std::move(row));
    total.ref_units += c.ref_units;
    total.distance += c.distance;
    total.ref_words += c.ref_words;
    total.word_distance += c.word_distance;
  }
  report.corpus = {"corpus", total.ref_units, total.distance, total.ref_words, total.word_distance,
                   rate(total.distance, total.ref_units), rate(total.word_distance, total.ref_words)};
  return report;
}

std::string error_report_csv(const ErrorRateReport& report) {
  std::string out = csv::format_row({"id", "ref_graphemes", "distance", "cer_pct", "wer_pct"});
  auto emit = [&](const ErrorRateRow& r) {
    out += csv::format_row({r.id, std::to_string(r.ref_length), std::to_string(r.distance), csv::fixed(r.cer_pct, 2),
                            csv::fixed(r.wer_pct, 2)});
  };
  for (const auto& r : report.rows) emit(r);
  emit(report.corpus);
  return out;
}

}  // namespace scriptorium
