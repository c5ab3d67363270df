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

#include "scriptorium/layers.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

#include <nlohmann/json.hpp>

#include "scriptorium/errors.hpp"
#include "scriptorium/unicode.hpp"
#include "util.hpp"

namespace scriptorium {
namespace {

bool is_boundary_cluster(const std::string& c) {
  return unicode::is_space_cluster(c) || unicode::is_punctuation_cluster(c);
}

bool context_holds(RuleContext ctx, const std::vector<std::string>& clusters, std::size_t begin, std::size_t end) {
  switch (ctx) {
    case RuleContext::Anywhere:
      return true;
    case RuleContext::WordInitial:
      return begin == 0 || is_boundary_cluster(clusters[begin - 1]);
    case RuleContext::WordFinal:
      return end == clusters.size() || is_boundary_cluster(clusters[end]);
  }
  return false;
}

bool matches_at(const TransformRule& r, const std::vector<std::string>& clusters, std::size_t i) {
  if (i + r.pattern.size() > clusters.size()) return false;
  for (std::size_t k = 0; k < r.pattern.size(); ++k)
    if (clusters[i + k] != r.pattern[k]) return false;
  return context_holds(r.context, clusters, i, i + r.pattern.size());
}

bool carries_mark(const std::string& cluster) {
  for (char32_t cp : unicode::decode(unicode::nfd(cluster)))
    if (unicode::is_combining(cp)) return true;
  return false;
}

// Pass result with per-cluster identity segments (not yet merged).
struct Pass {
  std::vector<std::string> source;
  std::vector<std::string> target;
  std::vector<Segment> segments;
};

Pass run_pass(const std::vector<std::string>& clusters, const TransformRuleSet& rules, const ApplyOptions& opt) {
  Pass pass;
  pass.source = clusters;
  std::vector<std::size_t> active;
  for (auto idx : rules.firing_order()) {
    auto kind = rules.rules()[idx].kind;
    if ((kind == RuleKind::Expand && opt.expand) || (kind == RuleKind::Letterform && opt.letterform)) active.push_back(idx);
  }

  std::size_t i = 0;
  while (i < clusters.size()) {
    const TransformRule* fired = nullptr;
    std::size_t fired_idx = 0;
    for (auto idx : active) {
      if (matches_at(rules.rules()[idx], clusters, i)) {
        fired = &rules.rules()[idx];
        fired_idx = idx;
        break;
      }
    }
    Segment seg;
    seg.source = {i, fired ? i + fired->pattern.size() : i + 1};
    seg.target.begin = pass.target.size();
    for (std::size_t k = seg.source.begin; k < seg.source.end; ++k) seg.source_text += clusters[k];
    if (fired) {
      for (auto& c : unicode::segment_graphemes(fired->replacement)) pass.target.push_back(std::move(c));
      seg.rules.push_back(fired_idx);
      seg.marked = opt.mark && fired->kind == RuleKind::Expand;
    } else {
      pass.target.push_back(clusters[i]);
    }
    seg.target.end = pass.target.size();
    pass.segments.push_back(std::move(seg));
    i = pass.segments.back().source.end;
  }
  return pass;
}

// Composes first (source -> mid) with second (mid -> target). Second-pass
// sources are single clusters, so they nest inside first-pass targets.
Pass compose(const Pass& first, const Pass& second) {
  Pass out;
  out.source = first.source;
  out.target = second.target;
  std::size_t j = 0;
  for (const auto& s1 : first.segments) {
    Segment seg;
    seg.source = s1.source;
    seg.source_text = s1.source_text;
    seg.rules = s1.rules;
    seg.marked = s1.marked;
    seg.target.begin = j < second.segments.size() ? second.segments[j].target.begin : second.target.size();
    seg.target.end = seg.target.begin;
    while (j < second.segments.size() && second.segments[j].source.begin < s1.target.end) {
      const auto& s2 = second.segments[j];
      seg.target.end = s2.target.end;
      for (auto r : s2.rules)
        if (std::find(seg.rules.begin(), seg.rules.end(), r) == seg.rules.end()) seg.rules.push_back(r);
      ++j;
    }
    out.segments.push_back(std::move(seg));
  }
  return out;
}

LayeredText finish(const Pass& pass, Layer layer, bool marked) {
  LayeredText lt;
  lt.layer = layer;
  lt.expansions_marked = marked;
  for (const auto& c : pass.source) lt.diplomatic += c;
  for (const auto& c : pass.target) lt.derived += c;
  for (const auto& seg : pass.segments) {
    if (seg.identity()) {
      for (auto t = seg.target.begin; t < seg.target.end; ++t)
        if (carries_mark(pass.target[t])) lt.unexpanded.push_back(t);
    }
    if (seg.identity() && !lt.offset_map.empty() && lt.offset_map.back().identity()) {
      auto& prev = lt.offset_map.back();
      prev.source.end = seg.source.end;
      prev.target.end = seg.target.end;
      prev.source_text += seg.source_text;
      continue;
    }
    lt.offset_map.push_back(seg);
  }
  return lt;
}

std::optional<RuleContext> context_from_string(std::string_view s) {
  if (s == "anywhere") return RuleContext::Anywhere;
  if (s == "word-final") return RuleContext::WordFinal;
  if (s == "word-initial") return RuleContext::WordInitial;
  return std::nullopt;
}

}  // namespace

std::string_view to_string(RuleKind k) { return k == RuleKind::Expand ? "expand" : "letterform"; }

std::string_view to_string(RuleContext c) {
  switch (c) {
    case RuleContext::Anywhere: return "anywhere";
    case RuleContext::WordFinal: return "word-final";
    case RuleContext::WordInitial: return "word-initial";
  }
  return "anywhere";
}

std::string_view to_string(Layer l) {
  switch (l) {
    case Layer::Diplomatic: return "diplomatic";
    case Layer::SemiDiplomatic: return "semi-diplomatic";
    case Layer::Normalised: return "normalised";
  }
  return "diplomatic";
}

Layer layer_from_string(std::string_view name) {
  if (name == "diplomatic") return Layer::Diplomatic;
  if (name == "semi-diplomatic") return Layer::SemiDiplomatic;
  if (name == "normalised" || name == "normalized") return Layer::Normalised;
  throw std::invalid_argument("unknown layer \"" + std::string(name) + "\"");
}

TransformRuleSet::TransformRuleSet(std::string name, std::string version, std::vector<TransformRule> rules)
    : name_(std::move(name)), version_(std::move(version)), rules_(std::move(rules)) {
  std::set<std::tuple<RuleKind, std::vector<std::string>, RuleContext>> seen;
  for (const auto& r : rules_) {
    if (r.pattern.empty()) throw std::invalid_argument("rule pattern is empty");
    if (r.replacement.empty()) throw std::invalid_argument("rule replacement is empty");
    auto repl = unicode::segment_graphemes(r.replacement);
    if (unicode::is_combining(unicode::decode(repl.front()).front()))
      throw std::invalid_argument("rule replacement starts with a combining mark");
    if (r.kind == RuleKind::Letterform && r.pattern.size() != 1)
      throw std::invalid_argument("letterform rules map exactly one cluster");
    if (!seen.emplace(r.kind, r.pattern, r.context).second) {
      std::string pat;
      for (auto& c : r.pattern) pat += c;
      throw DuplicateRule(r.source_line, std::string(to_string(r.kind)) + " \"" + pat + "\" " +
                                             std::string(to_string(r.context)));
    }
  }
  order_.resize(rules_.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::stable_sort(order_.begin(), order_.end(), [this](std::size_t a, std::size_t b) {
    const auto& ra = rules_[a];
    const auto& rb = rules_[b];
    if (ra.priority != rb.priority) return ra.priority > rb.priority;
    return ra.pattern.size() > rb.pattern.size();
  });
}

TransformRuleSet parse_transform_rules(std::string_view source) {
  unicode::check_utf8(source);
  std::string name, version;
  std::vector<TransformRule> rules;
  const auto lines = detail::split_lines(source);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::size_t lineno = n + 1;
    const auto line = lines[n];
    if (line.substr(0, 2) == "#@") {
      auto fields = detail::split(line.substr(2), '\t');
      const auto key = detail::trim(fields[0]);
      std::string value = fields.size() > 1 ? std::string(fields[1]) : std::string();
      if (key == "name") name = value;
      else if (key == "version") version = value;
      else throw ParseError({lineno, 3}, "unknown directive \"" + std::string(key) + "\"");
      continue;
    }
    if (detail::is_blank_or_comment(line)) continue;

    auto f = detail::split(line, '\t');
    if (f.size() < 4 || f.size() > 5)
      throw ParseError({lineno, 1}, "expected kind<TAB>pattern<TAB>context<TAB>replacement<TAB>priority");
    TransformRule r;
    r.source_line = lineno;
    const auto kind = detail::trim(f[0]);
    if (kind == "expand") r.kind = RuleKind::Expand;
    else if (kind == "letterform") r.kind = RuleKind::Letterform;
    else throw ParseError({lineno, 1}, "unknown rule kind \"" + std::string(kind) + "\"");

    std::string pattern;
    std::size_t col = 0;
    std::string err;
    const std::size_t pattern_col = f[0].size() + 2;
    if (!unicode::unescape(f[1], pattern, col, err)) throw ParseError({lineno, pattern_col + col - 1}, err);
    if (pattern.empty()) throw ParseError({lineno, pattern_col}, "empty pattern");
    r.pattern = unicode::segment_graphemes(pattern);

    auto ctx = context_from_string(detail::trim(f[2]));
    if (!ctx) throw ParseError({lineno, pattern_col + f[1].size() + 1}, "unknown context \"" + std::string(f[2]) + "\"");
    r.context = *ctx;

    const std::size_t repl_col = pattern_col + f[1].size() + f[2].size() + 2;
    if (!unicode::unescape(f[3], r.replacement, col, err)) throw ParseError({lineno, repl_col + col - 1}, err);
    r.replacement = unicode::nfc(r.replacement);
    if (r.replacement.empty()) throw ParseError({lineno, repl_col}, "empty replacement");

    if (f.size() == 5 && !detail::trim(f[4]).empty()) {
      try {
        std::size_t used = 0;
        const std::string p(detail::trim(f[4]));
        r.priority = std::stoi(p, &used);
        if (used != p.size()) throw std::invalid_argument(p);
      } catch (const std::logic_error&) {
        throw ParseError({lineno, repl_col + f[3].size() + 1}, "priority must be an integer");
      }
    }
    if (r.kind == RuleKind::Letterform && r.pattern.size() != 1)
      throw ParseError({lineno, pattern_col}, "letterform pattern must be exactly one grapheme cluster");
    rules.push_back(std::move(r));
  }
  try {
    return TransformRuleSet(std::move(name), std::move(version), std::move(rules));
  } catch (const std::invalid_argument& e) {
    throw ParseError({0, 0}, e.what());
  }
}

LayeredText apply_transform(std::string_view text, const TransformRuleSet& rules, bool mark) {
  return apply_transform(text, rules, ApplyOptions{true, true, mark});
}

LayeredText apply_transform(std::string_view text, const TransformRuleSet& rules, const ApplyOptions& options) {
  const auto pass = run_pass(unicode::segment_graphemes(text), rules, options);
  return finish(pass, options.letterform ? Layer::Normalised : Layer::SemiDiplomatic, options.mark);
}

DerivedDocument derive_layer(const Document& doc, const TransformRuleSet& rules, Layer target) {
  DerivedDocument out;
  out.document = doc;
  out.lines.reserve(doc.lines.size());
  for (std::size_t li = 0; li < doc.lines.size(); ++li) {
    const auto clusters = unicode::segment_graphemes(doc.lines[li].text);
    LayeredText lt;
    switch (target) {
      case Layer::Diplomatic:
        lt = finish(run_pass(clusters, TransformRuleSet{}, {false, false, false}), Layer::Diplomatic, false);
        break;
      case Layer::SemiDiplomatic:
        lt = finish(run_pass(clusters, rules, {true, false, true}), Layer::SemiDiplomatic, true);
        break;
      case Layer::Normalised: {
        auto expanded = run_pass(clusters, rules, {true, false, false});
        auto mapped = run_pass(expanded.target, rules, {false, true, false});
        lt = finish(compose(expanded, mapped), Layer::Normalised, false);
        break;
      }
    }
    out.document.lines[li].text = lt.derived;
    out.lines.push_back(std::move(lt));
  }
  return out;
}

std::string reconstruct_source(const LayeredText& layered) {
  const auto derived = unicode::segment_graphemes(layered.derived);
  std::string out;
  for (const auto& seg : layered.offset_map) {
    if (seg.identity()) {
      for (auto t = seg.target.begin; t < seg.target.end && t < derived.size(); ++t) out += derived[t];
    } else {
      out += seg.source_text;
    }
  }
  return out;
}

Span source_span_for(const LayeredText& layered, Span target) {
  Span result{0, 0};
  bool first = true;
  for (const auto& seg : layered.offset_map) {
    const bool overlaps = target.begin < target.end ? (seg.target.begin < target.end && target.begin < seg.target.end)
                                                    : (seg.target.begin <= target.begin && target.begin < seg.target.end);
    if (!overlaps) continue;
    const std::size_t b = seg.identity() ? seg.source.begin + (std::max(target.begin, seg.target.begin) - seg.target.begin)
                                         : seg.source.begin;
    const std::size_t e = seg.identity() ? seg.source.begin + (std::min(target.end, seg.target.end) - seg.target.begin)
                                         : seg.source.end;
    if (first) result.begin = b;
    result.end = std::max(e, result.begin);
    first = false;
  }
  return result;
}

std::string layers_to_jsonl(const std::string& doc_id, const std::vector<LayeredText>& lines,
                            const TransformRuleSet& rules) {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& lt = lines[i];
    nlohmann::ordered_json rec;
    rec["id"] = doc_id;
    rec["line"] = i;
    rec["layer"] = std::string(to_string(lt.layer));
    rec["diplomatic"] = lt.diplomatic;
    rec["derived"] = lt.derived;
    rec["flags"] = {{"expansions_marked", lt.expansions_marked}, {"unexpanded", lt.unexpanded}};
    auto map = nlohmann::ordered_json::array();
    for (const auto& seg : lt.offset_map) {
      nlohmann::ordered_json s;
      s["source"] = {seg.source.begin, seg.source.end};
      s["target"] = {seg.target.begin, seg.target.end};
      if (seg.identity()) {
        s["rule"] = "identity";
      } else {
        auto ids = nlohmann::ordered_json::array();
        for (auto r : seg.rules) ids.push_back(r);
        s["rule"] = ids;
        s["kind"] = std::string(to_string(rules.rules().at(seg.rules.front()).kind));
      }
      s["source_text"] = seg.source_text;
      s["marked"] = seg.marked;
      map.push_back(std::move(s));
    }
    rec["offset_map"] = std::move(map);
    out += rec.dump();
    out += '\n';
  }
  return out;
}

}  // namespace scriptorium
