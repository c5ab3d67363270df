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

#include "scriptorium/align.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <tuple>
#include <limits>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "scriptorium/csv.hpp"
#include "scriptorium/errors.hpp"
#include "scriptorium/metrics.hpp"
#include "scriptorium/unicode.hpp"
#include "util.hpp"

namespace scriptorium {
namespace {

constexpr double kTieEps = 1e-12;

std::vector<std::string> split_ws(std::string_view text) {
  std::vector<std::string> out;
  const std::string collapsed = collapse_whitespace(text);  // split() returns views into it
  for (auto w : detail::split(collapsed, ' '))
    if (!w.empty()) out.emplace_back(w);
  return out;
}

std::string join(const std::vector<std::string>& v, std::size_t b, std::size_t e) {
  std::string s;
  for (std::size_t i = b; i < e && i < v.size(); ++i) {
    if (!s.empty()) s.push_back(' ');
    s += v[i];
  }
  return s;
}

bool has_hyp_token(AlignKind k) { return k != AlignKind::GapInHypothesis; }
bool has_ref_token(AlignKind k) { return k != AlignKind::GapInReference; }

using Shingle = std::array<std::string_view, 3>;

std::map<Shingle, std::vector<std::size_t>> shingles(const std::vector<std::string>& tokens) {
  std::map<Shingle, std::vector<std::size_t>> out;
  for (std::size_t i = 0; i + 3 <= tokens.size(); ++i) out[{tokens[i], tokens[i + 1], tokens[i + 2]}].push_back(i);
  return out;
}

}  // namespace

std::vector<std::string> ReferenceText::flat_tokens() const {
  std::vector<std::string> out;
  for (const auto& u : units) out.insert(out.end(), u.tokens.begin(), u.tokens.end());
  return out;
}

std::vector<std::size_t> ReferenceText::token_units() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < units.size(); ++i) out.insert(out.end(), units[i].tokens.size(), i);
  return out;
}

std::string normalize_token(std::string_view token) {
  std::string out;
  for (char32_t cp : unicode::decode(unicode::to_lower(unicode::nfc(token))))
    if (!unicode::is_punctuation(cp)) unicode::append(out, cp);
  return out;
}

ReferenceText load_reference(std::string_view source, std::string label) {
  unicode::check_utf8(source);
  ReferenceText ref;
  ref.label = std::move(label);
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  const auto lines = detail::split_lines(source);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const auto line = lines[n];
    if (detail::is_blank_or_comment(line)) continue;
    std::vector<std::string_view> f = detail::split(line, '\t');
    if (f.size() < 4) {
      // space-separated fallback: first three fields, remainder is text
      f.clear();
      std::string_view rest = detail::trim(line);
      for (int k = 0; k < 3; ++k) {
        auto sp = rest.find(' ');
        if (sp == std::string_view::npos) throw ParseError({n + 1, 1}, "expected book<TAB>chapter<TAB>verse<TAB>text");
        f.push_back(rest.substr(0, sp));
        rest = detail::trim(rest.substr(sp + 1));
      }
      f.push_back(rest);
    } else if (f.size() > 4) {
      const auto offset = f[0].size() + f[1].size() + f[2].size() + 3;
      f.resize(3);
      f.push_back(line.substr(offset));
    }
    ReferenceUnit unit;
    unit.key = {std::string(detail::trim(f[0])), std::string(detail::trim(f[1])), std::string(detail::trim(f[2]))};
    if (unit.key.book.empty() || unit.key.chapter.empty() || unit.key.verse.empty())
      throw ParseError({n + 1, 1}, "empty book, chapter or verse field");
    if (!seen.emplace(unit.key.book, unit.key.chapter, unit.key.verse).second)
      throw DuplicateVerse(n + 1, unit.key.label());
    for (const auto& w : split_ws(f[3])) {
      auto t = normalize_token(w);
      if (!t.empty()) unit.tokens.push_back(std::move(t));
    }
    ref.units.push_back(std::move(unit));
  }
  return ref;
}

double token_similarity(std::string_view a, std::string_view b) {
  const auto ua = unicode::segment_graphemes(a);
  const auto ub = unicode::segment_graphemes(b);
  const auto longest = std::max(ua.size(), ub.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(edit_distance(ua, ub)) / static_cast<double>(longest);
}

std::string_view to_string(AlignKind k) {
  switch (k) {
    case AlignKind::Match: return "match";
    case AlignKind::Substitute: return "substitute";
    case AlignKind::GapInReference: return "gap-in-reference";
    case AlignKind::GapInHypothesis: return "gap-in-hypothesis";
  }
  return "match";
}

std::string_view to_string(VariantKind k) {
  switch (k) {
    case VariantKind::Insertion: return "insertion";
    case VariantKind::Omission: return "omission";
    case VariantKind::Substitution: return "substitution";
  }
  return "substitution";
}

std::vector<AlignmentOp> align_tokens(const std::vector<std::string>& hypothesis,
                                      const std::vector<std::string>& reference, const AlignOptions& options) {
  std::vector<std::string> hyp, ref;
  hyp.reserve(hypothesis.size());
  ref.reserve(reference.size());
  for (const auto& t : hypothesis) hyp.push_back(normalize_token(t));
  for (const auto& t : reference) ref.push_back(normalize_token(t));

  const std::size_t n = hyp.size();
  const std::size_t m = ref.size();
  const double gap = options.gap_penalty;
  constexpr double kNone = -std::numeric_limits<double>::infinity();

  // Similarities repeat across a window; memoize per distinct pair.
  std::map<std::pair<std::string_view, std::string_view>, double> memo;
  std::vector<double> sim(n * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      auto key = std::make_pair(std::string_view(hyp[i]), std::string_view(ref[j]));
      auto it = memo.find(key);
      if (it == memo.end()) it = memo.emplace(key, hyp[i] == ref[j] ? 1.0 : token_similarity(hyp[i], ref[j])).first;
      sim[i * m + j] = it->second >= options.substitute_threshold ? it->second : kNone;
    }

  std::vector<double> s((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> double& { return s[i * (m + 1) + j]; };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = gap * static_cast<double>(i);
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = gap * static_cast<double>(j);
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= m; ++j) {
      double best = std::max(at(i - 1, j) + gap, at(i, j - 1) + gap);
      const double d = sim[(i - 1) * m + (j - 1)];
      if (d != kNone) best = std::max(best, at(i - 1, j - 1) + d);
      at(i, j) = best;
    }

  std::vector<AlignmentOp> ops;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    const double here = at(i, j);
    if (i > 0 && j > 0) {
      const double d = sim[(i - 1) * m + (j - 1)];
      if (d != kNone && std::abs(at(i - 1, j - 1) + d - here) <= kTieEps) {
        ops.push_back({d >= 1.0 ? AlignKind::Match : AlignKind::Substitute, i - 1, j - 1, d});
        --i, --j;
        continue;
      }
    }
    if (j > 0 && std::abs(at(i, j - 1) + gap - here) <= kTieEps) {
      ops.push_back({AlignKind::GapInHypothesis, i, j - 1, gap});
      --j;
      continue;
    }
    ops.push_back({AlignKind::GapInReference, i - 1, j, gap});
    --i;
  }
  std::reverse(ops.begin(), ops.end());
  return ops;
}

double alignment_score(const std::vector<AlignmentOp>& ops) {
  double total = 0.0;
  for (const auto& op : ops) total += op.score;
  return total;
}

std::vector<VariantReading> extract_variants(const std::vector<AlignmentOp>& ops, std::size_t merge_gap) {
  std::vector<VariantReading> out;
  std::size_t k = 0;
  while (k < ops.size()) {
    if (ops[k].kind == AlignKind::Match) {
      ++k;
      continue;
    }
    std::size_t last = k;
    for (std::size_t probe = k + 1; probe < ops.size(); ++probe) {
      if (ops[probe].kind == AlignKind::Match) {
        if (probe - last > merge_gap) break;
        continue;
      }
      last = probe;
    }

    VariantReading v;
    v.first_op = k;
    v.last_op = last;
    v.hyp_begin = ops[k].hyp;
    v.ref_begin = ops[k].ref;
    v.hyp_end = v.hyp_begin;
    v.ref_end = v.ref_begin;
    bool insertions = false, omissions = false, substitutions = false;
    for (std::size_t q = k; q <= last; ++q) {
      const auto& op = ops[q];
      if (has_hyp_token(op.kind)) v.hyp_end = op.hyp + 1;
      if (has_ref_token(op.kind)) v.ref_end = op.ref + 1;
      insertions |= op.kind == AlignKind::GapInReference;
      omissions |= op.kind == AlignKind::GapInHypothesis;
      substitutions |= op.kind == AlignKind::Substitute;
    }
    if (insertions && !omissions && !substitutions) v.kind = VariantKind::Insertion;
    else if (omissions && !insertions && !substitutions) v.kind = VariantKind::Omission;
    else v.kind = VariantKind::Substitution;
    out.push_back(std::move(v));
    k = last + 1;
  }
  return out;
}

void annotate_variants(std::vector<VariantReading>& readings, const std::vector<HypothesisToken>& hypothesis,
                       const ReferenceText& reference, std::size_t context_tokens) {
  const auto ref_tokens = reference.flat_tokens();
  const auto ref_units = reference.token_units();
  for (auto& v : readings) {
    std::string dipl, norm;
    for (std::size_t i = v.hyp_begin; i < v.hyp_end && i < hypothesis.size(); ++i) {
      if (!dipl.empty()) dipl.push_back(' ');
      if (!norm.empty()) norm.push_back(' ');
      dipl += hypothesis[i].diplomatic;
      norm += hypothesis[i].normalised;
    }
    v.diplomatic = std::move(dipl);
    v.normalised = std::move(norm);
    v.reference = join(ref_tokens, v.ref_begin, v.ref_end);
    if (!ref_tokens.empty()) {
      std::size_t anchor = v.ref_end > v.ref_begin ? v.ref_begin : (v.ref_begin > 0 ? v.ref_begin - 1 : 0);
      anchor = std::min(anchor, ref_tokens.size() - 1);
      v.verse = reference.units[ref_units[anchor]].key;
    }
    const std::size_t before = v.ref_begin >= context_tokens ? v.ref_begin - context_tokens : 0;
    std::string ctx = join(ref_tokens, before, v.ref_begin);
    ctx += (ctx.empty() ? "[" : " [") + v.reference + "]";
    const auto after = join(ref_tokens, v.ref_end, v.ref_end + context_tokens);
    if (!after.empty()) ctx += " " + after;
    v.reference_context = std::move(ctx);
  }
}

std::vector<HypothesisToken> hypothesis_tokens(const DerivedDocument& derived) {
  std::vector<HypothesisToken> out;
  for (std::size_t li = 0; li < derived.lines.size(); ++li) {
    const auto& lt = derived.lines[li];
    const auto source_clusters = unicode::segment_graphemes(lt.diplomatic);
    for (const auto& tok : tokenize_line(lt.derived, li)) {
      auto norm = normalize_token(tok.surface);
      if (norm.empty()) continue;
      const auto src = source_span_for(lt, {tok.begin, tok.end});
      std::string dipl;
      for (auto c = src.begin; c < src.end && c < source_clusters.size(); ++c) dipl += source_clusters[c];
      out.push_back({std::move(norm), tok.surface, std::move(dipl), li});
    }
  }
  return out;
}

std::vector<AlignmentOp> anchored_align(const std::vector<std::string>& hypothesis,
                                        const std::vector<std::string>& reference, const AlignOptions& options,
                                        std::size_t* anchor_count) {
  std::vector<std::string> hyp, ref;
  for (const auto& t : hypothesis) hyp.push_back(normalize_token(t));
  for (const auto& t : reference) ref.push_back(normalize_token(t));

  // Candidate anchors: shingles occurring exactly once on each side.
  const auto hs = shingles(hyp);
  const auto rs = shingles(ref);
  std::vector<std::pair<std::size_t, std::size_t>> cand;
  for (const auto& [sh, hpos] : hs) {
    if (hpos.size() != 1) continue;
    auto it = rs.find(sh);
    if (it == rs.end() || it->second.size() != 1) continue;
    cand.emplace_back(hpos.front(), it->second.front());
  }
  std::sort(cand.begin(), cand.end());

  // Longest chain increasing in both coordinates (patience-style LIS on ref).
  std::vector<std::size_t> tails, prev(cand.size(), std::numeric_limits<std::size_t>::max());
  for (std::size_t c = 0; c < cand.size(); ++c) {
    auto pos = std::lower_bound(tails.begin(), tails.end(), cand[c].second,
                                [&](std::size_t idx, std::size_t r) { return cand[idx].second < r; });
    if (pos != tails.begin()) prev[c] = *(pos - 1);
    if (pos == tails.end()) tails.push_back(c);
    else *pos = c;
  }
  std::vector<std::pair<std::size_t, std::size_t>> chain;
  if (!tails.empty())
    for (std::size_t c = tails.back(); c != std::numeric_limits<std::size_t>::max(); c = prev[c]) chain.push_back(cand[c]);
  std::reverse(chain.begin(), chain.end());

  std::vector<AlignmentOp> ops;
  std::size_t hi = 0, ri = 0, anchors = 0;
  auto align_window = [&](std::size_t hend, std::size_t rend) {
    std::vector<std::string> h(hyp.begin() + static_cast<std::ptrdiff_t>(hi), hyp.begin() + static_cast<std::ptrdiff_t>(hend));
    std::vector<std::string> r(ref.begin() + static_cast<std::ptrdiff_t>(ri), ref.begin() + static_cast<std::ptrdiff_t>(rend));
    for (auto op : align_tokens(h, r, options)) {
      op.hyp += hi;
      op.ref += ri;
      ops.push_back(op);
    }
    hi = hend;
    ri = rend;
  };
  for (const auto& [ha, ra] : chain) {
    if (ha < hi || ra < ri) continue;  // overlaps the previous anchor
    align_window(ha, ra);
    for (int k = 0; k < 3; ++k) ops.push_back({AlignKind::Match, hi + k, ri + k, 1.0});
    hi += 3;
    ri += 3;
    ++anchors;
  }
  align_window(hyp.size(), ref.size());
  if (anchor_count) *anchor_count = anchors;
  return ops;
}

CollationResult collate(const DerivedDocument& derived, const ReferenceText& reference, std::size_t merge_gap,
                        const AlignOptions& options) {
  CollationResult result;
  result.hypothesis = hypothesis_tokens(derived);
  std::vector<std::string> hyp;
  for (const auto& t : result.hypothesis) hyp.push_back(t.normalised);
  result.ops = anchored_align(hyp, reference.flat_tokens(), options, &result.anchors);
  auto variants = extract_variants(result.ops, merge_gap);

  // A transcription usually covers a stretch of the reference, not all of
  // it. Whole verses skipped before the first or after the last aligned
  // token are outside the witness, not omissions in it.
  const auto units = reference.token_units();
  auto whole_units = [&](const VariantReading& v) {
    if (v.ref_end <= v.ref_begin) return false;
    const bool starts = v.ref_begin == 0 || units[v.ref_begin - 1] != units[v.ref_begin];
    const bool ends = v.ref_end == units.size() || units[v.ref_end] != units[v.ref_end - 1];
    return starts && ends;
  };
  for (std::size_t i = 0; i < variants.size(); ++i) {
    const auto& v = variants[i];
    const bool at_edge = v.first_op == 0 || v.last_op + 1 == result.ops.size();
    if (v.kind == VariantKind::Omission && at_edge && whole_units(v)) {
      std::set<std::size_t> skipped(units.begin() + static_cast<std::ptrdiff_t>(v.ref_begin),
                                    units.begin() + static_cast<std::ptrdiff_t>(v.ref_end));
      result.units_outside += skipped.size();
      continue;
    }
    result.variants.push_back(v);
  }
  annotate_variants(result.variants, result.hypothesis, reference);
  return result;
}

std::string variants_csv(const std::string& doc_id, const std::vector<VariantReading>& variants) {
  std::string out = csv::format_row(
      {"id", "book", "chapter", "verse", "kind", "diplomatic", "normalised", "reference", "reference_context"});
  for (const auto& v : variants)
    out += csv::format_row({doc_id, v.verse.book, v.verse.chapter, v.verse.verse, std::string(to_string(v.kind)),
                            v.diplomatic, v.normalised, v.reference, v.reference_context});
  return out;
}

std::string variants_json(const std::string& doc_id, const std::vector<VariantReading>& variants) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& v : variants) {
    nlohmann::ordered_json o;
    o["id"] = doc_id;
    o["book"] = v.verse.book;
    o["chapter"] = v.verse.chapter;
    o["verse"] = v.verse.verse;
    o["kind"] = std::string(to_string(v.kind));
    o["diplomatic"] = v.diplomatic;
    o["normalised"] = v.normalised;
    o["reference"] = v.reference;
    o["reference_context"] = v.reference_context;
    arr.push_back(std::move(o));
  }
  return arr.dump(2) + "\n";
}

}  // namespace scriptorium
