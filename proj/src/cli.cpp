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

#include "scriptorium/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "scriptorium/align.hpp"
#include "scriptorium/csv.hpp"
#include "scriptorium/errors.hpp"
#include "scriptorium/harvest.hpp"
#include "scriptorium/ingest.hpp"
#include "scriptorium/layers.hpp"
#include "scriptorium/metrics.hpp"
#include "scriptorium/plot.hpp"
#include "scriptorium/policy.hpp"
#include "scriptorium/profile.hpp"
#include "scriptorium/unicode.hpp"
#include "util.hpp"

namespace scriptorium::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

class IoError : public Error {
 public:
  using Error::Error;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

// Runs fn(0..n-1) on up to `jobs` threads; results come back in index
// order and the first failing index's exception is rethrown.
template <class F>
auto parallel_map(std::size_t n, unsigned jobs, F fn) -> std::vector<decltype(fn(std::size_t{}))> {
  using R = decltype(fn(std::size_t{}));
  std::vector<R> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        results[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, jobs), n));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

struct Context {
  std::ostream& out;
  std::ostream& err;
  unsigned jobs = 1;
};

void emit(Context& ctx, const std::string& output, std::string_view content) {
  if (output.empty() || output == "-")
    ctx.out << content;
  else
    write_atomic(output, content);
}

fs::path in_dir(const std::string& dir, std::string_view name) { return fs::path(dir.empty() ? "." : dir) / name; }

std::string document_id(const fs::path& p) { return p.stem().string(); }

std::vector<Document> load_documents(Context& ctx, const std::vector<std::string>& paths) {
  return parallel_map(paths.size(), ctx.jobs,
                      [&](std::size_t i) { return parse_document(read_file(paths[i]), document_id(paths[i])); });
}

CharacterPolicy load_policy(const std::string& path) { return parse_policy(read_file(path)); }
TransformRuleSet load_rules(const std::string& path) { return parse_transform_rules(read_file(path)); }

std::vector<std::string> lines_of(const Document& doc) {
  std::vector<std::string> lines;
  for (const auto& l : doc.lines) lines.push_back(l.text);
  return lines;
}

// ---------------------------------------------------------------- validate

struct ValidateArgs {
  std::string policy, output;
  std::vector<std::string> inputs;
};

int cmd_validate(Context& ctx, const ValidateArgs& a) {
  const auto policy = load_policy(a.policy);
  struct FileResult {
    std::string diagnostics;
    std::string rows;
    std::size_t count = 0;
  };
  auto results = parallel_map(a.inputs.size(), ctx.jobs, [&](std::size_t i) {
    const auto doc = parse_document(read_file(a.inputs[i]), document_id(a.inputs[i]));
    const auto report = validate_lines(lines_of(doc), policy);
    FileResult r;
    r.count = report.violations.size();
    for (const auto& v : report.violations) {
      const auto codepoints = unicode::escape(v.cluster);
      r.diagnostics += a.inputs[i] + ":" + std::to_string(v.line + 1) + ":" + std::to_string(v.grapheme + 1) + ": " +
                       v.reason + " " + codepoints + " (" + v.cluster + ")\n";
      r.rows += csv::format_row({a.inputs[i], std::to_string(v.line + 1), std::to_string(v.grapheme + 1), v.cluster,
                                 codepoints, v.reason});
    }
    return r;
  });

  std::size_t total = 0;
  std::string report = csv::format_row({"file", "line", "position", "cluster", "codepoints", "reason"});
  for (const auto& r : results) {
    ctx.err << r.diagnostics;
    report += r.rows;
    total += r.count;
  }
  if (!a.output.empty()) write_atomic(a.output, report);
  ctx.err << total << " violation" << (total == 1 ? "" : "s") << " in " << a.inputs.size() << " file"
          << (a.inputs.size() == 1 ? "" : "s") << "\n";
  return total == 0 ? kOk : kViolations;
}

// ------------------------------------------------------------------- audit

struct AuditArgs {
  std::string policy, output;
};

int cmd_audit(Context& ctx, const AuditArgs& a) {
  const auto findings = audit_nlp_safety(load_policy(a.policy));
  std::string report = csv::format_row({"kind", "subject", "codepoints", "explanation"});
  for (const auto& f : findings) {
    std::string subject, codepoints;
    for (const auto& s : f.subject) {
      subject += (subject.empty() ? "" : " ") + s;
      codepoints += (codepoints.empty() ? "" : " ") + unicode::escape(s);
    }
    report += csv::format_row({std::string(to_string(f.kind)), subject, codepoints, f.explanation});
    ctx.err << to_string(f.kind) << ": " << codepoints << ": " << f.explanation << "\n";
  }
  emit(ctx, a.output, report);
  ctx.err << findings.size() << " finding" << (findings.size() == 1 ? "" : "s") << "\n";
  return findings.empty() ? kOk : kViolations;
}

// --------------------------------------------------------------- statement

struct StatementArgs {
  std::string policy, models, principles, output;
  std::vector<std::string> inputs;
};

int cmd_statement(Context& ctx, const StatementArgs& a) {
  TranscriptionStatement st;
  st.policy = load_policy(a.policy);
  if (!a.models.empty()) st.model_history = parse_model_history(read_file(a.models));
  if (!a.principles.empty()) st.principles_text = read_file(a.principles);
  const auto docs = load_documents(ctx, a.inputs);
  st.corpus.document_count = docs.size();
  for (const auto& d : docs) st.corpus.shelfmarks.push_back(d.metadata.shelfmark.empty() ? d.id : d.metadata.shelfmark);
  emit(ctx, a.output, emit_statement(st));
  return kOk;
}

// ------------------------------------------------------------------ ingest

struct IngestArgs {
  std::string output;
  std::vector<std::string> inputs;
};

int cmd_ingest(Context& ctx, const IngestArgs& a) {
  emit(ctx, a.output, to_corpus_jsonl(load_documents(ctx, a.inputs)));
  return kOk;
}

// ------------------------------------------------------------------ derive

struct DeriveArgs {
  std::string rules, layer = "normalised", output;
  std::vector<std::string> inputs;
};

int cmd_derive(Context& ctx, const DeriveArgs& a) {
  const auto rules = load_rules(a.rules);
  const auto layer = layer_from_string(a.layer);
  auto chunks = parallel_map(a.inputs.size(), ctx.jobs, [&](std::size_t i) {
    const auto doc = parse_document(read_file(a.inputs[i]), document_id(a.inputs[i]));
    return layers_to_jsonl(doc.id, derive_layer(doc, rules, layer).lines, rules);
  });
  std::string all;
  for (const auto& c : chunks) all += c;
  emit(ctx, a.output, all);
  return kOk;
}

// --------------------------------------------------------------------- cer

struct CerArgs {
  std::vector<std::string> reference, hypothesis;
  std::string unit = "grapheme", output;
};

int cmd_cer(Context& ctx, const CerArgs& a) {
  const auto unit = edit_unit_from_string(a.unit);
  const auto refs = load_documents(ctx, a.reference);
  const auto hyps = load_documents(ctx, a.hypothesis);
  std::vector<DocumentPair> pairs;
  for (const auto& r : refs) {
    auto it = std::find_if(hyps.begin(), hyps.end(), [&](const Document& h) { return h.id == r.id; });
    if (it == hyps.end()) throw IoError("no hypothesis for reference document \"" + r.id + "\"");
    pairs.push_back({r.id, r, *it});
  }
  for (const auto& h : hyps)
    if (std::none_of(refs.begin(), refs.end(), [&](const Document& r) { return r.id == h.id; }))
      throw IoError("no reference for hypothesis document \"" + h.id + "\"");
  std::sort(pairs.begin(), pairs.end(), [](const auto& x, const auto& y) { return x.id < y.id; });

  const auto report = error_rates(pairs, unit);
  for (const auto& w : report.warnings) ctx.err << "warning: " << w << "\n";
  emit(ctx, a.output, error_report_csv(report));
  return kOk;
}

// ------------------------------------------------------------------- align

struct AlignArgs {
  std::string rules, reference, format = "csv", output;
  std::size_t merge_gap = 1;
  std::vector<std::string> inputs;
};

int cmd_align(Context& ctx, const AlignArgs& a) {
  if (a.format != "csv" && a.format != "json") throw CLI::ValidationError("--format", "must be csv or json");
  const auto rules = load_rules(a.rules);
  const auto reference = load_reference(read_file(a.reference), fs::path(a.reference).stem().string());
  auto chunks = parallel_map(a.inputs.size(), ctx.jobs, [&](std::size_t i) {
    const auto doc = parse_document(read_file(a.inputs[i]), document_id(a.inputs[i]));
    const auto result = collate(derive_layer(doc, rules, Layer::Normalised), reference, a.merge_gap);
    return std::make_pair(doc.id, result.variants);
  });
  std::string all;
  if (a.format == "csv") {
    all = csv::format_row({"id", "book", "chapter", "verse", "kind", "diplomatic", "normalised", "reference",
                           "reference_context"});
    for (const auto& [id, variants] : chunks) {
      auto body = variants_csv(id, variants);
      all += body.substr(body.find('\n') + 1);  // drop the per-document header
    }
  } else {
    json arr = json::array();
    for (const auto& [id, variants] : chunks) arr.push_back(json::parse(variants_json(id, variants)));
    all = arr.dump(2) + "\n";
  }
  emit(ctx, a.output, all);
  return kOk;
}

// ----------------------------------------------------- profiling helpers

struct LayerArgs {
  std::string layer = "diplomatic", rules;
};

std::vector<LayerTokens> corpus_tokens(Context& ctx, const LayerArgs& la, const std::vector<std::string>& paths) {
  const auto layer = layer_from_string(la.layer);
  std::optional<TransformRuleSet> rules;
  if (!la.rules.empty()) rules = load_rules(la.rules);
  if (layer != Layer::Diplomatic && !rules) throw CLI::ValidationError("--rules", "required for derived layers");
  return parallel_map(paths.size(), ctx.jobs, [&](std::size_t i) {
    const auto doc = parse_document(read_file(paths[i]), document_id(paths[i]));
    return layer_tokens(doc, layer, rules ? &*rules : nullptr);
  });
}

// ------------------------------------------------------------- concordance

struct ConcordanceArgs {
  LayerArgs layer;
  std::string pattern, output;
  std::size_t bins = 10;
  std::vector<std::string> inputs;
};

int cmd_concordance(Context& ctx, const ConcordanceArgs& a) {
  const auto corpus = corpus_tokens(ctx, a.layer, a.inputs);
  const auto matches = match_pattern(corpus, a.pattern);
  emit(ctx, a.output, density_csv(matches, density_profile(matches, a.bins)));
  return kOk;
}

// ----------------------------------------------------------- rolling-delta

struct RollingArgs {
  LayerArgs layer;
  std::vector<std::string> candidates;  // LABEL=PATH
  std::string target, output;
  RollingOptions options;
};

int cmd_rolling(Context& ctx, const RollingArgs& a) {
  std::vector<std::string> labels, paths;
  for (const auto& c : a.candidates) {
    const auto eq = c.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == c.size())
      throw CLI::ValidationError("--candidate", "expected LABEL=PATH, got \"" + c + "\"");
    labels.push_back(c.substr(0, eq));
    paths.push_back(c.substr(eq + 1));
  }
  const auto tables = corpus_tokens(ctx, a.layer, paths);
  std::vector<LabeledTable> candidates;
  for (std::size_t i = 0; i < tables.size(); ++i) candidates.push_back({labels[i], word_frequencies(tables[i])});
  const auto target = corpus_tokens(ctx, a.layer, {a.target}).front();
  const auto profile = rolling_classify(target.tokens, candidates, a.options);
  if (profile.degenerate) ctx.err << "warning: reference statistics are degenerate; distances are all 0\n";
  emit(ctx, a.output, delta_csv(profile));
  return kOk;
}

// --------------------------------------------------------------- tfidf-pca

struct TfidfArgs {
  LayerArgs layer;
  std::size_t top_k = 100, components = 2;
  std::string dictionary, out_dir = ".";
  std::vector<std::string> inputs;
};

int cmd_tfidf(Context& ctx, const TfidfArgs& a) {
  std::vector<FrequencyTable> corpus;
  for (const auto& t : corpus_tokens(ctx, a.layer, a.inputs)) corpus.push_back(word_frequencies(t));
  const auto vocab =
      a.dictionary.empty() ? Vocabulary::top(a.top_k) : Vocabulary::dictionary(parse_dictionary(read_file(a.dictionary)));
  const auto result = tfidf_pca(corpus, vocab, a.components);
  fs::create_directories(a.out_dir);
  write_atomic(in_dir(a.out_dir, "features.csv"), feature_matrix_csv(result.features));
  write_atomic(in_dir(a.out_dir, "scores.csv"), scores_csv(result.features, result.pca));
  write_atomic(in_dir(a.out_dir, "loadings.csv"), loadings_csv(result.features, result.pca));
  write_atomic(in_dir(a.out_dir, "variance.csv"), variance_csv(result.pca));
  return kOk;
}

// ----------------------------------------------------------------- harvest

struct HarvestArgs {
  std::string list, output;
  long timeout_ms = 10000;
  int retries = 2;
};

int cmd_harvest(Context& ctx, const HarvestArgs& a) {
  struct Wanted {
    std::string url, shelfmark, origin, date;
  };
  std::vector<Wanted> wanted;
  const auto list = read_file(a.list);
  for (auto line : detail::split_lines(list)) {
    if (detail::is_blank_or_comment(line)) continue;
    auto fields = detail::split(line, '\t');
    Wanted w;
    w.url = std::string(detail::trim(fields[0]));
    if (fields.size() > 1) w.shelfmark = std::string(detail::trim(fields[1]));
    if (fields.size() > 2) w.origin = std::string(detail::trim(fields[2]));
    if (fields.size() > 3) w.date = std::string(detail::trim(fields[3]));
    wanted.push_back(std::move(w));
  }
  auto options = FetchOptions::from_environment();
  options.timeout = std::chrono::milliseconds(a.timeout_ms);
  options.retries = a.retries;

  auto lines = parallel_map(wanted.size(), ctx.jobs, [&](std::size_t i) {
    const auto& w = wanted[i];
    const auto record = fetch_manifest(w.url, options);
    auto pick = [&](const std::string& given, std::vector<std::string_view> labels) {
      if (!given.empty()) return given;
      return record.metadata_value(labels).value_or("");
    };
    json j;
    j["shelfmark"] = pick(w.shelfmark, {"Shelfmark", "Shelf mark", "Call number", "Cote", "Signatur", "Segnatura"});
    j["institution"] = pick("", {"Repository", "Holding Institution", "Institution", "Library", "Owner"});
    j["origin"] = pick(w.origin, {"Origin", "Place of origin", "Place", "Provenance", "Origine", "Entstehungsort"});
    j["date"] = pick(w.date, {"Date", "Date of origin", "Dating", "Datation", "Datierung"});
    j["record"] = json::parse(record_to_json(record));
    return j.dump() + "\n";
  });
  std::string all;
  for (const auto& l : lines) all += l;
  emit(ctx, a.output, all);
  return kOk;
}

// ---------------------------------------------------------------- handlist

struct HandlistArgs {
  std::string records, synonyms, output;
};

int cmd_handlist(Context& ctx, const HandlistArgs& a) {
  std::optional<OriginSynonyms> custom;
  if (!a.synonyms.empty()) custom = parse_synonyms(read_file(a.synonyms));
  const auto& synonyms = custom ? *custom : OriginSynonyms::builtin();
  std::vector<HandlistEntry> entries;
  std::size_t line_no = 0;
  const auto records = read_file(a.records);
  for (auto line : detail::split_lines(records)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw JsonError(a.records + ":" + std::to_string(line_no) + ": " + e.what());
    }
    HandlistEntry e;
    e.shelfmark = j.value("shelfmark", "");
    e.institution = j.value("institution", "");
    e.record = record_from_json(j.at("record").dump());
    e.provenance = normalize_provenance(j.value("origin", ""), j.value("date", ""), synonyms);
    for (const auto& w : e.provenance.warnings) ctx.err << a.records << ":" << line_no << ": warning: " << w << "\n";
    entries.push_back(std::move(e));
  }
  emit(ctx, a.output, build_handlist(std::move(entries)));
  return kOk;
}

// -------------------------------------------------------------------- plot

struct PlotArgs {
  std::string kind, input, loadings, output;
  double width = 800, height = 400;
};

int cmd_plot(Context& ctx, const PlotArgs& a) {
  const auto kind = plot_kind_from_string(a.kind);
  const auto table = csv::parse(read_file(a.input));
  PlotData data;
  switch (kind) {
    case PlotKind::Density: data = density_plot_data(table); break;
    case PlotKind::Rolling: data = rolling_plot_data(table); break;
    case PlotKind::PcaScatter: {
      if (a.loadings.empty()) throw CLI::ValidationError("--loadings", "required for pca-scatter");
      data = pca_plot_data(table, csv::parse(read_file(a.loadings)));
      break;
    }
  }
  emit(ctx, a.output, render_plot(kind, data, {a.width, a.height}));
  return kOk;
}

}  // namespace

void write_atomic(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ostringstream suffix;
  suffix << ".tmp." << std::hash<std::thread::id>{}(std::this_thread::get_id());
  fs::path tmp = path;
  tmp += suffix.str();
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + tmp.string());
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("cannot write " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot replace " + path.string());
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Character policies, text layers, HTR evaluation, collation and scribal profiling for "
               "diplomatic transcriptions.",
               "scriptorium"};
  app.set_config("--config", "", "Read options from a TOML/INI file; command-line flags take precedence");
  app.require_subcommand(1, 1);
  app.fallthrough();
  Context ctx{out, err};
  app.add_option("-j,--jobs", ctx.jobs, "Files processed in parallel")->check(CLI::Range(1u, 256u));

  std::function<int()> action;
  auto existing = CLI::ExistingFile;

  ValidateArgs va;
  auto* validate = app.add_subcommand("validate", "Check documents against a character policy (exit 1 on violations)");
  validate->add_option("--policy", va.policy, "Policy TSV")->required()->check(existing);
  validate->add_option("-o,--output", va.output, "Write a CSV violation report");
  validate->add_option("inputs", va.inputs, "PAGE, ALTO or plain-text files")->required()->check(existing);
  validate->callback([&] { action = [&] { return cmd_validate(ctx, va); }; });

  AuditArgs aa;
  auto* audit = app.add_subcommand("audit", "Audit a policy for NLP hazards (exit 1 on findings)");
  audit->add_option("--policy", aa.policy, "Policy TSV")->required()->check(existing);
  audit->add_option("-o,--output", aa.output, "CSV findings (default: stdout)");
  audit->callback([&] { action = [&] { return cmd_audit(ctx, aa); }; });

  StatementArgs sa;
  auto* statement = app.add_subcommand("statement", "Emit a Markdown transcription statement");
  statement->add_option("--policy", sa.policy, "Policy TSV")->required()->check(existing);
  statement->add_option("--models", sa.models, "Model history TSV")->check(existing);
  statement->add_option("--principles", sa.principles, "Principles text (Markdown)")->check(existing);
  statement->add_option("-o,--output", sa.output, "Output file (default: stdout)");
  statement->add_option("inputs", sa.inputs, "Corpus documents")->check(existing);
  statement->callback([&] { action = [&] { return cmd_statement(ctx, sa); }; });

  IngestArgs ia;
  auto* ingest = app.add_subcommand("ingest", "Convert documents to corpus JSONL");
  ingest->add_option("-o,--output", ia.output, "Output file (default: stdout)");
  ingest->add_option("inputs", ia.inputs, "PAGE, ALTO or plain-text files")->required()->check(existing);
  ingest->callback([&] { action = [&] { return cmd_ingest(ctx, ia); }; });

  DeriveArgs da;
  auto* derive = app.add_subcommand("derive", "Derive a semi-diplomatic or normalised layer (JSONL)");
  derive->add_option("--rules", da.rules, "Transform rules TSV")->required()->check(existing);
  derive->add_option("--layer", da.layer, "semi-diplomatic | normalised")
      ->check(CLI::IsMember({"diplomatic", "semi-diplomatic", "normalised", "normalized"}));
  derive->add_option("-o,--output", da.output, "Output file (default: stdout)");
  derive->add_option("inputs", da.inputs, "Documents")->required()->check(existing);
  derive->callback([&] { action = [&] { return cmd_derive(ctx, da); }; });

  CerArgs ca;
  auto* cer = app.add_subcommand("cer", "Character and word error rates (documents paired by file stem)");
  cer->add_option("--reference", ca.reference, "Ground-truth documents")->required()->check(existing);
  cer->add_option("--hypothesis", ca.hypothesis, "Recognised documents")->required()->check(existing);
  cer->add_option("--unit", ca.unit, "grapheme | codepoint")->check(CLI::IsMember({"grapheme", "codepoint"}));
  cer->add_option("-o,--output", ca.output, "Output CSV (default: stdout)");
  cer->callback([&] { action = [&] { return cmd_cer(ctx, ca); }; });

  AlignArgs ala;
  auto* align = app.add_subcommand("align", "Collate documents against a reference text and list variants");
  align->add_option("--rules", ala.rules, "Transform rules TSV")->required()->check(existing);
  align->add_option("--reference", ala.reference, "Reference text TSV")->required()->check(existing);
  align->add_option("--merge-gap", ala.merge_gap, "Matches tolerated inside one variant");
  align->add_option("--format", ala.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  align->add_option("-o,--output", ala.output, "Output file (default: stdout)");
  align->add_option("inputs", ala.inputs, "Documents")->required()->check(existing);
  align->callback([&] { action = [&] { return cmd_align(ctx, ala); }; });

  auto layer_options = [&](CLI::App* sub, LayerArgs& la) {
    sub->add_option("--layer", la.layer, "Layer to tokenize")
        ->check(CLI::IsMember({"diplomatic", "semi-diplomatic", "normalised", "normalized"}));
    sub->add_option("--rules", la.rules, "Transform rules TSV (derived layers)")->check(existing);
  };

  ConcordanceArgs coa;
  auto* concordance = app.add_subcommand("concordance", "Pattern matches and density profile (CSV)");
  concordance->add_option("--pattern", coa.pattern, "Token, or prefix ending in '*'")->required();
  concordance->add_option("--bins", coa.bins, "Density bins")->check(CLI::PositiveNumber);
  layer_options(concordance, coa.layer);
  concordance->add_option("-o,--output", coa.output, "Output CSV (default: stdout)");
  concordance->add_option("inputs", coa.inputs, "Documents")->required()->check(existing);
  concordance->callback([&] { action = [&] { return cmd_concordance(ctx, coa); }; });

  RollingArgs ra;
  auto* rolling = app.add_subcommand("rolling-delta", "Rolling Delta classification of one document (CSV)");
  rolling->add_option("--candidate", ra.candidates, "LABEL=PATH, repeatable")->required();
  rolling->add_option("--window", ra.options.window, "Window in tokens")->check(CLI::PositiveNumber);
  rolling->add_option("--step", ra.options.step, "Step in tokens")->check(CLI::PositiveNumber);
  rolling->add_option("--mfw", ra.options.mfw, "Most frequent words")->check(CLI::PositiveNumber);
  layer_options(rolling, ra.layer);
  rolling->add_option("-o,--output", ra.output, "Output CSV (default: stdout)");
  rolling->add_option("target", ra.target, "Document to classify")->required()->check(existing);
  rolling->callback([&] { action = [&] { return cmd_rolling(ctx, ra); }; });

  TfidfArgs ta;
  auto* tfidf = app.add_subcommand("tfidf-pca", "TF-IDF features and PCA (features/scores/loadings/variance CSV)");
  tfidf->add_option("--top-k", ta.top_k, "Vocabulary size when no dictionary is given")->check(CLI::PositiveNumber);
  tfidf->add_option("--dictionary", ta.dictionary, "Custom vocabulary, one term per line")->check(existing);
  tfidf->add_option("--components", ta.components, "Principal components")->check(CLI::PositiveNumber);
  layer_options(tfidf, ta.layer);
  tfidf->add_option("--out-dir", ta.out_dir, "Directory for the four CSV files");
  tfidf->add_option("inputs", ta.inputs, "Documents (at least 3)")->required()->check(existing);
  tfidf->callback([&] { action = [&] { return cmd_tfidf(ctx, ta); }; });

  HarvestArgs ha;
  auto* harvest = app.add_subcommand("harvest", "Fetch IIIF manifests listed as url[TAB shelfmark[TAB origin[TAB date]]]");
  harvest->add_option("--list", ha.list, "Manifest list")->required()->check(existing);
  harvest->add_option("--timeout-ms", ha.timeout_ms, "Per-request timeout")->check(CLI::PositiveNumber);
  harvest->add_option("--retries", ha.retries, "Extra attempts after a failure")->check(CLI::NonNegativeNumber);
  harvest->add_option("-o,--output", ha.output, "Records JSONL (default: stdout)");
  harvest->callback([&] { action = [&] { return cmd_harvest(ctx, ha); }; });

  HandlistArgs hla;
  auto* handlist = app.add_subcommand("handlist", "Normalize harvested records into a handlist CSV");
  handlist->add_option("--records", hla.records, "Records JSONL from harvest")->required()->check(existing);
  handlist->add_option("--synonyms", hla.synonyms, "Origin synonym table (TSV)")->check(existing);
  handlist->add_option("-o,--output", hla.output, "Output CSV (default: stdout)");
  handlist->callback([&] { action = [&] { return cmd_handlist(ctx, hla); }; });

  PlotArgs pa;
  auto* plot = app.add_subcommand("plot", "Render a density, rolling or pca-scatter SVG from a CSV export");
  plot->add_option("--kind", pa.kind, "density | rolling | pca-scatter")
      ->required()
      ->check(CLI::IsMember({"density", "rolling", "pca-scatter"}));
  plot->add_option("--loadings", pa.loadings, "loadings.csv (pca-scatter)")->check(existing);
  plot->add_option("--width", pa.width, "Width in px")->check(CLI::PositiveNumber);
  plot->add_option("--height", pa.height, "Height in px")->check(CLI::PositiveNumber);
  plot->add_option("-o,--output", pa.output, "Output SVG (default: stdout)");
  plot->add_option("input", pa.input, "density.csv, delta.csv or scores.csv")->required()->check(existing);
  plot->callback([&] { action = [&] { return cmd_plot(ctx, pa); }; });

  std::vector<std::string> reversed(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(reversed.begin(), reversed.end());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "scriptorium: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    return action ? action() : kUsage;
  } catch (const CLI::ParseError& e) {
    err << "scriptorium: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "scriptorium: error: " << e.what() << "\n";
    return kUsage;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace scriptorium::cli
