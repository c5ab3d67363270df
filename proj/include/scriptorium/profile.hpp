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

// Scribal profiling: wildcard concordance and density profiles, Burrows'
// Delta (static and rolling), and TF-IDF features projected with PCA.
// Everything runs on whichever layer the caller tokenized; the diplomatic
// layer is the default in the CLI.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "scriptorium/layers.hpp"

namespace scriptorium {

struct LayerTokens {
  std::string id;
  std::vector<std::string> tokens;
};

// Token surfaces of a document on a layer. Derived layers need rules.
LayerTokens layer_tokens(const Document& doc, Layer layer, const TransformRuleSet* rules = nullptr);

struct PatternMatch {
  std::size_t index;
  double position;  // index / max(1, token_count - 1)
};

struct DocumentMatches {
  std::string id;
  std::size_t token_count = 0;
  std::vector<PatternMatch> matches;
};

struct PatternMatchSet {
  std::string pattern;
  std::vector<DocumentMatches> documents;
};

// Exact match, or prefix match with a trailing '*'. Grapheme-exact and
// case-sensitive. Throws BadPattern for an interior '*' or empty pattern.
PatternMatchSet match_pattern(const std::vector<LayerTokens>& corpus, std::string_view pattern);

struct DocumentDensity {
  std::string id;
  std::size_t length = 0;  // tokens
  std::vector<std::size_t> counts;
};

struct DensityProfile {
  std::size_t bins = 1;
  std::vector<DocumentDensity> documents;
};

// Bin of position p is floor(p * bins), clamped to bins - 1.
DensityProfile density_profile(const PatternMatchSet& matches, std::size_t bins);
std::string density_csv(const PatternMatchSet& matches, const DensityProfile& profile);

struct FrequencyTable {
  std::string id;
  std::map<std::string, std::size_t> counts;
  std::size_t total = 0;

  double relative(const std::string& word) const;
};

FrequencyTable word_frequencies(const LayerTokens& doc);
FrequencyTable word_frequencies(std::string id, const std::vector<std::string>& tokens, std::size_t begin,
                                std::size_t end);

// Most-frequent-word list with per-word mean and population standard
// deviation of relative frequencies over a reference set.
struct DeltaReference {
  std::vector<std::string> words;  // used words, MFW order
  std::vector<double> means;
  std::vector<double> stddevs;
  std::vector<std::string> skipped;  // zero-variance words
};

// Throws std::invalid_argument for mfw == 0 or an empty set;
// DegenerateReference when every MFW word has zero variance.
DeltaReference delta_reference(const std::vector<FrequencyTable>& reference_set, std::size_t mfw);

double delta_distance(const FrequencyTable& a, const FrequencyTable& b, const DeltaReference& reference);
double delta_distance(const FrequencyTable& a, const FrequencyTable& b, const std::vector<FrequencyTable>& reference_set,
                      std::size_t mfw);

struct LabeledTable {
  std::string label;
  FrequencyTable table;
};

struct RollingOptions {
  std::size_t window = 1500;
  std::size_t step = 300;
  std::size_t mfw = 100;
};

struct DeltaWindow {
  std::size_t begin = 0, end = 0;
  double center = 0.0;
  std::vector<double> distances;  // one per candidate, candidate order
  std::string predicted;
  bool tie = false;
};

struct DeltaProfile {
  std::size_t window = 0, step = 0, mfw = 0;
  std::vector<std::string> labels;
  std::vector<DeltaWindow> windows;
  std::vector<std::string> skipped_words;
  bool degenerate = false;  // reference statistics unusable; all distances 0
};

// Throws WindowTooLarge, NoCandidates, std::invalid_argument on step == 0.
DeltaProfile rolling_classify(const std::vector<std::string>& tokens, const std::vector<LabeledTable>& candidates,
                              const RollingOptions& options = {});
std::string delta_csv(const DeltaProfile& profile);

struct Vocabulary {
  std::optional<std::size_t> top_k;  // used when custom is empty
  std::vector<std::string> custom;

  static Vocabulary top(std::size_t k) { return {k, {}}; }
  static Vocabulary dictionary(std::vector<std::string> terms) { return {std::nullopt, std::move(terms)}; }
};

// One term per line, UTF-8; blank lines and '#' comments ignored.
std::vector<std::string> parse_dictionary(std::string_view source);

struct FeatureMatrix {
  std::vector<std::string> documents;
  std::vector<std::string> terms;
  Eigen::MatrixXd weights;  // documents x terms
  bool custom_vocabulary = false;
};

struct PcaResult {
  Eigen::MatrixXd scores;             // documents x k
  Eigen::MatrixXd loadings;           // features x k, orthonormal columns
  Eigen::VectorXd explained_variance; // eigenvalues, non-increasing
  Eigen::VectorXd explained_ratio;
  Eigen::MatrixXd standardized;       // centered (and scaled) input
};

// Centers columns, scales those with non-zero variance to unit variance,
// eigen-decomposes the covariance. Each component's largest-magnitude loading
// is made positive.
PcaResult pca(const Eigen::MatrixXd& data, std::size_t components = 2);

struct TfidfPca {
  FeatureMatrix features;
  PcaResult pca;
};

// Throws TooFewDocuments (< 3) and EmptyVocabulary.
TfidfPca tfidf_pca(const std::vector<FrequencyTable>& corpus, const Vocabulary& vocabulary,
                   std::size_t components = 2);

std::string feature_matrix_csv(const FeatureMatrix& features);
std::string scores_csv(const FeatureMatrix& features, const PcaResult& pca);
std::string loadings_csv(const FeatureMatrix& features, const PcaResult& pca);
std::string variance_csv(const PcaResult& pca);

}  // namespace scriptorium
