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

#include "scriptorium/profile.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "scriptorium/csv.hpp"
#include "scriptorium/errors.hpp"
#include "scriptorium/unicode.hpp"
#include "util.hpp"

namespace scriptorium {
namespace {

bool is_zero_spread(double sd, double mean) { return !(sd > 1e-12 * std::max(1.0, std::abs(mean))); }

std::string num(double v) { return csv::fixed(v, 6); }

}  // namespace

LayerTokens layer_tokens(const Document& doc, Layer layer, const TransformRuleSet* rules) {
  LayerTokens out;
  out.id = doc.id;
  if (layer == Layer::Diplomatic || !rules) {
    for (auto& t : tokenize(doc)) out.tokens.push_back(std::move(t.surface));
    return out;
  }
  const auto derived = derive_layer(doc, *rules, layer);
  for (auto& t : tokenize(derived.document)) out.tokens.push_back(std::move(t.surface));
  return out;
}

PatternMatchSet match_pattern(const std::vector<LayerTokens>& corpus, std::string_view pattern) {
  if (pattern.empty()) throw BadPattern(std::string(pattern));
  const auto star = pattern.find('*');
  if (star != std::string_view::npos && star != pattern.size() - 1) throw BadPattern(std::string(pattern));
  const bool prefix = star != std::string_view::npos;
  const auto needle = unicode::segment_graphemes(prefix ? pattern.substr(0, pattern.size() - 1) : pattern);
  if (needle.empty()) throw BadPattern(std::string(pattern));

  PatternMatchSet set;
  set.pattern = std::string(pattern);
  for (const auto& doc : corpus) {
    DocumentMatches dm;
    dm.id = doc.id;
    dm.token_count = doc.tokens.size();
    const double denom = static_cast<double>(std::max<std::size_t>(1, doc.tokens.size() - (doc.tokens.empty() ? 0 : 1)));
    for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
      const auto clusters = unicode::segment_graphemes(doc.tokens[i]);
      const bool hit = prefix ? clusters.size() >= needle.size() && std::equal(needle.begin(), needle.end(), clusters.begin())
                              : clusters == needle;
      if (hit) dm.matches.push_back({i, static_cast<double>(i) / denom});
    }
    set.documents.push_back(std::move(dm));
  }
  return set;
}

DensityProfile density_profile(const PatternMatchSet& matches, std::size_t bins) {
  if (bins == 0) throw std::invalid_argument("bins must be at least 1");
  DensityProfile profile;
  profile.bins = bins;
  for (const auto& doc : matches.documents) {
    DocumentDensity d{doc.id, doc.token_count, std::vector<std::size_t>(bins, 0)};
    for (const auto& m : doc.matches) {
      auto bin = static_cast<std::size_t>(std::floor(m.position * static_cast<double>(bins)));
      d.counts[std::min(bin, bins - 1)]++;
    }
    profile.documents.push_back(std::move(d));
  }
  return profile;
}

std::string density_csv(const PatternMatchSet& matches, const DensityProfile& profile) {
  csv::Row header{"id", "pattern", "tokens", "matches"};
  for (std::size_t b = 0; b < profile.bins; ++b) header.push_back("bin_" + std::to_string(b));
  std::string out = csv::format_row(header);
  for (const auto& d : profile.documents) {
    std::size_t total = 0;
    for (auto c : d.counts) total += c;
    csv::Row row{d.id, matches.pattern, std::to_string(d.length), std::to_string(total)};
    for (auto c : d.counts) row.push_back(std::to_string(c));
    out += csv::format_row(row);
  }
  return out;
}

double FrequencyTable::relative(const std::string& word) const {
  if (total == 0) return 0.0;
  auto it = counts.find(word);
  return it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(total);
}

FrequencyTable word_frequencies(const LayerTokens& doc) {
  return word_frequencies(doc.id, doc.tokens, 0, doc.tokens.size());
}

FrequencyTable word_frequencies(std::string id, const std::vector<std::string>& tokens, std::size_t begin,
                                std::size_t end) {
  FrequencyTable t;
  t.id = std::move(id);
  for (std::size_t i = begin; i < end && i < tokens.size(); ++i) {
    ++t.counts[tokens[i]];
    ++t.total;
  }
  return t;
}

DeltaReference delta_reference(const std::vector<FrequencyTable>& reference_set, std::size_t mfw) {
  if (mfw == 0) throw std::invalid_argument("mfw must be at least 1");
  if (reference_set.empty()) throw std::invalid_argument("reference set is empty");

  std::map<std::string, std::size_t> pooled;
  for (const auto& t : reference_set)
    for (const auto& [w, c] : t.counts) pooled[w] += c;
  std::vector<std::pair<std::string, std::size_t>> ranked(pooled.begin(), pooled.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > mfw) ranked.resize(mfw);

  DeltaReference ref;
  const double n = static_cast<double>(reference_set.size());
  for (const auto& [w, _] : ranked) {
    double mean = 0.0;
    for (const auto& t : reference_set) mean += t.relative(w);
    mean /= n;
    double var = 0.0;
    for (const auto& t : reference_set) {
      const double d = t.relative(w) - mean;
      var += d * d;
    }
    const double sd = std::sqrt(var / n);
    if (is_zero_spread(sd, mean)) {
      ref.skipped.push_back(w);
      continue;
    }
    ref.words.push_back(w);
    ref.means.push_back(mean);
    ref.stddevs.push_back(sd);
  }
  if (ref.words.empty()) throw DegenerateReference();
  return ref;
}

double delta_distance(const FrequencyTable& a, const FrequencyTable& b, const DeltaReference& reference) {
  double sum = 0.0;
  for (std::size_t k = 0; k < reference.words.size(); ++k) {
    const auto& w = reference.words[k];
    const double za = (a.relative(w) - reference.means[k]) / reference.stddevs[k];
    const double zb = (b.relative(w) - reference.means[k]) / reference.stddevs[k];
    sum += std::abs(za - zb);
  }
  return sum / static_cast<double>(reference.words.size());
}

double delta_distance(const FrequencyTable& a, const FrequencyTable& b, const std::vector<FrequencyTable>& reference_set,
                      std::size_t mfw) {
  return delta_distance(a, b, delta_reference(reference_set, mfw));
}

DeltaProfile rolling_classify(const std::vector<std::string>& tokens, const std::vector<LabeledTable>& candidates,
                              const RollingOptions& options) {
  if (candidates.empty()) throw NoCandidates();
  if (options.step == 0) throw std::invalid_argument("step must be at least 1");
  if (options.window == 0) throw std::invalid_argument("window must be at least 1");
  if (options.window > tokens.size()) throw WindowTooLarge(options.window, tokens.size());

  DeltaProfile profile;
  profile.window = options.window;
  profile.step = options.step;
  profile.mfw = options.mfw;
  for (const auto& c : candidates) profile.labels.push_back(c.label);

  std::vector<FrequencyTable> reference_set;
  for (const auto& c : candidates) reference_set.push_back(c.table);
  std::optional<DeltaReference> ref;
  try {
    ref = delta_reference(reference_set, options.mfw);
    profile.skipped_words = ref->skipped;
  } catch (const DegenerateReference&) {
    profile.degenerate = true;
  }

  for (std::size_t begin = 0; begin + options.window <= tokens.size(); begin += options.step) {
    DeltaWindow w;
    w.begin = begin;
    w.end = begin + options.window;
    w.center = static_cast<double>(begin) + static_cast<double>(options.window) / 2.0;
    const auto table = word_frequencies("window", tokens, w.begin, w.end);
    for (const auto& c : candidates) w.distances.push_back(ref ? delta_distance(table, c.table, *ref) : 0.0);

    // argmin; ties go to the lexicographically first label
    std::size_t best = 0;
    for (std::size_t k = 1; k < candidates.size(); ++k) {
      if (w.distances[k] < w.distances[best] ||
          (w.distances[k] == w.distances[best] && candidates[k].label < candidates[best].label))
        best = k;
    }
    for (std::size_t k = 0; k < candidates.size(); ++k)
      if (k != best && w.distances[k] == w.distances[best]) w.tie = true;
    w.predicted = candidates[best].label;
    profile.windows.push_back(std::move(w));
  }
  return profile;
}

std::string delta_csv(const DeltaProfile& profile) {
  csv::Row header{"window_start", "window_end", "window_center"};
  for (const auto& l : profile.labels) header.push_back(l);
  header.push_back("label");
  header.push_back("tie");
  std::string out = csv::format_row(header);
  for (const auto& w : profile.windows) {
    csv::Row row{std::to_string(w.begin), std::to_string(w.end), csv::fixed(w.center, 1)};
    for (double d : w.distances) row.push_back(num(d));
    row.push_back(w.predicted);
    row.push_back(w.tie ? "1" : "0");
    out += csv::format_row(row);
  }
  return out;
}

std::vector<std::string> parse_dictionary(std::string_view source) {
  unicode::check_utf8(source);
  std::vector<std::string> terms;
  for (auto line : detail::split_lines(source)) {
    if (detail::is_blank_or_comment(line)) continue;
    terms.push_back(unicode::nfc(detail::trim(line)));
  }
  return terms;
}

PcaResult pca(const Eigen::MatrixXd& data, std::size_t components) {
  const auto n = data.rows();
  const auto v = data.cols();
  if (n < 2) throw std::invalid_argument("PCA needs at least two rows");
  if (v < 1) throw std::invalid_argument("PCA needs at least one column");
  const auto k = static_cast<Eigen::Index>(std::min<std::size_t>(components, static_cast<std::size_t>(v)));

  PcaResult out;
  Eigen::MatrixXd x = data.rowwise() - data.colwise().mean();
  for (Eigen::Index j = 0; j < v; ++j) {
    const double var = x.col(j).squaredNorm() / static_cast<double>(n - 1);
    if (var > 0.0) x.col(j) /= std::sqrt(var);
  }
  out.standardized = x;

  const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw Error("covariance eigen-decomposition failed");

  // Eigen sorts ascending; take the top k in descending order.
  out.loadings.resize(v, k);
  out.explained_variance.resize(k);
  for (Eigen::Index c = 0; c < k; ++c) {
    const auto src = v - 1 - c;
    out.loadings.col(c) = solver.eigenvectors().col(src);
    out.explained_variance(c) = std::max(0.0, solver.eigenvalues()(src));
  }
  for (Eigen::Index c = 0; c < k; ++c) {
    Eigen::Index arg = 0;
    for (Eigen::Index r = 1; r < v; ++r)
      if (std::abs(out.loadings(r, c)) > std::abs(out.loadings(arg, c)) + 1e-12) arg = r;
    if (out.loadings(arg, c) < 0) out.loadings.col(c) *= -1.0;
  }
  out.scores = x * out.loadings;
  const double trace = std::max(0.0, cov.trace());
  out.explained_ratio = trace > 0 ? Eigen::VectorXd(out.explained_variance / trace) : Eigen::VectorXd::Zero(k);
  return out;
}

TfidfPca tfidf_pca(const std::vector<FrequencyTable>& corpus, const Vocabulary& vocabulary, std::size_t components) {
  if (corpus.size() < 3) throw TooFewDocuments(corpus.size());

  std::map<std::string, std::size_t> df, pooled;
  for (const auto& t : corpus)
    for (const auto& [w, c] : t.counts)
      if (c > 0) {
        ++df[w];
        pooled[w] += c;
      }

  TfidfPca result;
  auto& fm = result.features;
  fm.custom_vocabulary = !vocabulary.custom.empty();
  if (fm.custom_vocabulary) {
    std::set<std::string> seen;
    for (const auto& term : vocabulary.custom) {
      auto t = unicode::nfc(term);
      if (df.count(t) && seen.insert(t).second) fm.terms.push_back(std::move(t));
    }
  } else {
    std::vector<std::pair<std::string, std::size_t>> ranked(pooled.begin(), pooled.end());
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    const std::size_t k = vocabulary.top_k.value_or(100);
    for (std::size_t i = 0; i < ranked.size() && i < k; ++i) fm.terms.push_back(ranked[i].first);
  }
  if (fm.terms.empty()) throw EmptyVocabulary();

  const double n = static_cast<double>(corpus.size());
  fm.weights = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(corpus.size()), static_cast<Eigen::Index>(fm.terms.size()));
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    fm.documents.push_back(corpus[d].id);
    for (std::size_t j = 0; j < fm.terms.size(); ++j) {
      const double idf = std::log(n / static_cast<double>(df.at(fm.terms[j])));
      fm.weights(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(j)) = corpus[d].relative(fm.terms[j]) * idf;
    }
  }
  result.pca = pca(fm.weights, components);
  return result;
}

std::string feature_matrix_csv(const FeatureMatrix& features) {
  csv::Row header{"id"};
  header.insert(header.end(), features.terms.begin(), features.terms.end());
  std::string out = csv::format_row(header);
  for (Eigen::Index d = 0; d < features.weights.rows(); ++d) {
    csv::Row row{features.documents[static_cast<std::size_t>(d)]};
    for (Eigen::Index j = 0; j < features.weights.cols(); ++j) row.push_back(num(features.weights(d, j)));
    out += csv::format_row(row);
  }
  return out;
}

std::string scores_csv(const FeatureMatrix& features, const PcaResult& pca) {
  csv::Row header{"id"};
  for (Eigen::Index c = 0; c < pca.scores.cols(); ++c) header.push_back("pc" + std::to_string(c + 1));
  std::string out = csv::format_row(header);
  for (Eigen::Index d = 0; d < pca.scores.rows(); ++d) {
    csv::Row row{features.documents[static_cast<std::size_t>(d)]};
    for (Eigen::Index c = 0; c < pca.scores.cols(); ++c) row.push_back(num(pca.scores(d, c)));
    out += csv::format_row(row);
  }
  return out;
}

std::string loadings_csv(const FeatureMatrix& features, const PcaResult& pca) {
  csv::Row header{"term"};
  for (Eigen::Index c = 0; c < pca.loadings.cols(); ++c) header.push_back("pc" + std::to_string(c + 1));
  std::string out = csv::format_row(header);
  for (Eigen::Index j = 0; j < pca.loadings.rows(); ++j) {
    csv::Row row{features.terms[static_cast<std::size_t>(j)]};
    for (Eigen::Index c = 0; c < pca.loadings.cols(); ++c) row.push_back(num(pca.loadings(j, c)));
    out += csv::format_row(row);
  }
  return out;
}

std::string variance_csv(const PcaResult& pca) {
  std::string out = csv::format_row({"component", "explained_variance", "explained_ratio"});
  for (Eigen::Index c = 0; c < pca.explained_variance.size(); ++c)
    out += csv::format_row({"pc" + std::to_string(c + 1), num(pca.explained_variance(c)), num(pca.explained_ratio(c))});
  return out;
}

}  // namespace scriptorium
