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

// Deterministic SVG 1.1 charts for the profiling exports. Coordinates are
// printed with four decimals and nothing time- or locale-dependent is
// emitted, so identical input gives identical bytes.

#include <array>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "scriptorium/csv.hpp"
#include "scriptorium/profile.hpp"

namespace scriptorium {

enum class PlotKind { Density, Rolling, PcaScatter };
std::string_view to_string(PlotKind k);
PlotKind plot_kind_from_string(std::string_view name);  // density | rolling | pca-scatter

struct Dimensions {
  double width = 800;
  double height = 400;
};

struct DensitySeries {
  std::string id;
  std::vector<double> counts;  // one per bin
};

struct DensityPlotData {
  std::string pattern;
  std::vector<DensitySeries> series;
};

struct RollingPlotData {
  std::vector<std::string> labels;               // candidates
  std::vector<double> centers;                   // window centers
  std::vector<std::vector<double>> distances;    // [candidate][window]
  std::vector<std::string> predicted;            // per window
};

struct PcaPlotData {
  std::vector<std::string> documents;
  std::vector<std::array<double, 2>> scores;
  std::vector<std::string> terms;
  std::vector<std::array<double, 2>> loadings;
};

using PlotData = std::variant<DensityPlotData, RollingPlotData, PcaPlotData>;

// Density: one <rect class="bar"> per bin per document. Rolling: one
// polyline per candidate plus a band colored by predicted label.
// Pca-scatter: documents as points, loadings as labeled vectors from the
// origin. Throws EmptyData, std::invalid_argument when kind and data differ.
std::string render_plot(PlotKind kind, const PlotData& data, const Dimensions& dimensions = {});

DensityPlotData density_plot_data(const PatternMatchSet& matches, const DensityProfile& profile);
RollingPlotData rolling_plot_data(const DeltaProfile& profile);
PcaPlotData pca_plot_data(const FeatureMatrix& features, const PcaResult& pca);

// From the CSV exports written by the CLI. Throws FormatError.
DensityPlotData density_plot_data(const csv::Table& density);
RollingPlotData rolling_plot_data(const csv::Table& delta);
PcaPlotData pca_plot_data(const csv::Table& scores, const csv::Table& loadings);

}  // namespace scriptorium
