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

// Python bindings. Thin by design: values cross as str, list, dict and
// numpy arrays; the C++ types stay on this side.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "scriptorium/align.hpp"
#include "scriptorium/errors.hpp"
#include "scriptorium/harvest.hpp"
#include "scriptorium/ingest.hpp"
#include "scriptorium/layers.hpp"
#include "scriptorium/metrics.hpp"
#include "scriptorium/plot.hpp"
#include "scriptorium/policy.hpp"
#include "scriptorium/profile.hpp"
#include "scriptorium/unicode.hpp"

namespace py = pybind11;
using namespace scriptorium;

namespace {

std::vector<LayerTokens> corpus_from(const std::map<std::string, std::vector<std::string>>& docs) {
  std::vector<LayerTokens> out;
  for (const auto& [id, tokens] : docs) out.push_back({id, tokens});
  return out;
}

FrequencyTable freq(const std::string& id, const std::vector<std::string>& tokens) {
  return word_frequencies(id, tokens, 0, tokens.size());
}

}  // namespace

PYBIND11_MODULE(_scriptorium, m) {
  m.doc() = "Character policies, text layers, HTR metrics, collation and scribal profiling.";

  static py::exception<Error> base(m, "ScriptoriumError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(base.ptr(), e.what());
    }
  });

  m.def("nfc", &unicode::nfc, py::arg("text"));
  m.def("graphemes", &unicode::segment_graphemes, py::arg("text"), "Extended grapheme clusters of NFC text.");

  // ---- policy
  py::class_<CharacterPolicy>(m, "Policy")
      .def_static("parse", &parse_policy, py::arg("source"))
      .def_property_readonly("name", &CharacterPolicy::name)
      .def_property_readonly("version", &CharacterPolicy::version)
      .def("__len__", &CharacterPolicy::size)
      .def("authorizes", &CharacterPolicy::authorizes, py::arg("cluster"))
      .def("serialize", [](const CharacterPolicy& p) { return serialize_policy(p); })
      .def(
          "validate",
          [](const CharacterPolicy& p, const std::string& text) {
            py::list out;
            for (const auto& v : validate_text(text, p).violations)
              out.append(py::dict(py::arg("line") = v.line, py::arg("grapheme") = v.grapheme,
                                  py::arg("cluster") = v.cluster, py::arg("reason") = v.reason));
            return out;
          },
          py::arg("text"), "Unauthorised clusters as dicts with 0-based line and grapheme positions.")
      .def("audit", [](const CharacterPolicy& p) {
        py::list out;
        for (const auto& f : audit_nlp_safety(p))
          out.append(py::dict(py::arg("kind") = std::string(to_string(f.kind)), py::arg("subject") = f.subject,
                              py::arg("explanation") = f.explanation));
        return out;
      });

  // ---- layers
  py::class_<TransformRuleSet>(m, "Rules")
      .def_static("parse", &parse_transform_rules, py::arg("source"))
      .def("__len__", [](const TransformRuleSet& r) { return r.rules().size(); })
      .def(
          "apply",
          [](const TransformRuleSet& r, const std::string& text, const std::string& layer) {
            const auto target = layer_from_string(layer);
            ApplyOptions o;
            o.expand = target != Layer::Diplomatic;
            o.letterform = target == Layer::Normalised;
            o.mark = target == Layer::SemiDiplomatic;
            const auto lt = apply_transform(unicode::nfc(text), r, o);
            py::list segments;
            for (const auto& s : lt.offset_map)
              segments.append(py::dict(py::arg("source") = py::make_tuple(s.source.begin, s.source.end),
                                       py::arg("target") = py::make_tuple(s.target.begin, s.target.end),
                                       py::arg("source_text") = s.source_text, py::arg("identity") = s.identity()));
            return py::dict(py::arg("diplomatic") = lt.diplomatic, py::arg("derived") = lt.derived,
                            py::arg("offset_map") = segments, py::arg("unexpanded") = lt.unexpanded,
                            py::arg("reconstructed") = reconstruct_source(lt));
          },
          py::arg("text"), py::arg("layer") = "normalised");

  // ---- metrics
  m.def(
      "edit_distance",
      [](const std::string& ref, const std::string& hyp, const std::string& unit) {
        return edit_script(ref, hyp, edit_unit_from_string(unit)).distance;
      },
      py::arg("reference"), py::arg("hypothesis"), py::arg("unit") = "grapheme");
  m.def(
      "cer",
      [](const std::string& ref, const std::string& hyp, const std::string& unit) {
        Document r{"x", {{ref, std::nullopt, std::nullopt}}, {}, SourceFormat::Plain};
        Document h{"x", {{hyp, std::nullopt, std::nullopt}}, {}, SourceFormat::Plain};
        return error_rates({{"x", r, h}}, edit_unit_from_string(unit)).rows.at(0).cer_pct;
      },
      py::arg("reference"), py::arg("hypothesis"), py::arg("unit") = "grapheme", "Character error rate in percent.");

  // ---- align
  m.def(
      "align",
      [](const std::vector<std::string>& hyp, const std::vector<std::string>& ref) {
        const auto ops = align_tokens(hyp, ref);
        py::list out;
        for (const auto& op : ops)
          out.append(py::make_tuple(std::string(to_string(op.kind)), op.hyp, op.ref, op.score));
        return py::make_tuple(alignment_score(ops), out);
      },
      py::arg("hypothesis"), py::arg("reference"), "Returns (score, [(kind, hyp, ref, score), ...]).");
  m.def(
      "variants",
      [](const std::string& text, const TransformRuleSet& rules, const std::string& reference) {
        Document doc = parse_plaintext(text, "text");
        const auto r = collate(derive_layer(doc, rules, Layer::Normalised), load_reference(reference));
        py::list out;
        for (const auto& v : r.variants)
          out.append(py::dict(py::arg("kind") = std::string(to_string(v.kind)), py::arg("verse") = v.verse.label(),
                              py::arg("diplomatic") = v.diplomatic, py::arg("normalised") = v.normalised,
                              py::arg("reference") = v.reference, py::arg("context") = v.reference_context));
        return out;
      },
      py::arg("text"), py::arg("rules"), py::arg("reference"));

  // ---- profile
  m.def(
      "density",
      [](const std::map<std::string, std::vector<std::string>>& docs, const std::string& pattern, std::size_t bins) {
        const auto p = density_profile(match_pattern(corpus_from(docs), pattern), bins);
        std::map<std::string, std::vector<std::size_t>> out;
        for (const auto& d : p.documents) out[d.id] = d.counts;
        return out;
      },
      py::arg("documents"), py::arg("pattern"), py::arg("bins") = 10);
  m.def(
      "rolling_delta",
      [](const std::vector<std::string>& tokens, const std::map<std::string, std::vector<std::string>>& candidates,
         std::size_t window, std::size_t step, std::size_t mfw) {
        std::vector<LabeledTable> c;
        for (const auto& [label, toks] : candidates) c.push_back({label, freq(label, toks)});
        const auto p = rolling_classify(tokens, c, {window, step, mfw});
        py::list out;
        for (const auto& w : p.windows)
          out.append(py::dict(py::arg("begin") = w.begin, py::arg("end") = w.end, py::arg("center") = w.center,
                              py::arg("distances") = w.distances, py::arg("label") = w.predicted,
                              py::arg("tie") = w.tie));
        return out;
      },
      py::arg("tokens"), py::arg("candidates"), py::arg("window") = 1500, py::arg("step") = 300,
      py::arg("mfw") = 100);
  m.def(
      "tfidf_pca",
      [](const std::map<std::string, std::vector<std::string>>& docs, std::optional<std::vector<std::string>> dictionary,
         std::size_t top_k, std::size_t components) {
        std::vector<FrequencyTable> tables;
        for (const auto& [id, toks] : docs) tables.push_back(freq(id, toks));
        const auto vocab = dictionary ? Vocabulary::dictionary(*dictionary) : Vocabulary::top(top_k);
        const auto r = tfidf_pca(tables, vocab, components);
        return py::dict(py::arg("documents") = r.features.documents, py::arg("terms") = r.features.terms,
                        py::arg("weights") = r.features.weights, py::arg("scores") = r.pca.scores,
                        py::arg("loadings") = r.pca.loadings,
                        py::arg("explained_variance") = r.pca.explained_variance,
                        py::arg("explained_ratio") = r.pca.explained_ratio);
      },
      py::arg("documents"), py::arg("dictionary") = py::none(), py::arg("top_k") = 100, py::arg("components") = 2);

  // ---- harvest
  m.def(
      "parse_manifest",
      [](const std::string& json, const std::string& url) {
        const auto r = parse_manifest(json, url);
        py::list meta;
        for (const auto& p : r.metadata) meta.append(py::make_tuple(p.label, p.value));
        return py::dict(py::arg("version") = r.version, py::arg("label") = r.label,
                        py::arg("canvases") = r.canvases.size(), py::arg("license") = r.license,
                        py::arg("attribution") = r.attribution, py::arg("metadata") = meta);
      },
      py::arg("json"), py::arg("url") = "");
  m.def(
      "normalize_provenance",
      [](const std::string& origin, const std::string& date) {
        const auto p = normalize_provenance(origin, date);
        return py::dict(py::arg("origins") = p.origins, py::arg("year_from") = p.year_from,
                        py::arg("year_to") = p.year_to, py::arg("confidence") = std::string(to_string(p.confidence)),
                        py::arg("warnings") = p.warnings);
      },
      py::arg("origin"), py::arg("date"));

  // ---- plot
  m.def(
      "density_svg",
      [](const std::map<std::string, std::vector<double>>& series, const std::string& pattern, double width,
         double height) {
        DensityPlotData d{pattern, {}};
        for (const auto& [id, counts] : series) d.series.push_back({id, counts});
        return render_plot(PlotKind::Density, d, {width, height});
      },
      py::arg("series"), py::arg("pattern") = "", py::arg("width") = 800, py::arg("height") = 400);
}
