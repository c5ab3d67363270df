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

#include "scriptorium/plot.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "scriptorium/errors.hpp"

namespace scriptorium {
namespace {

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                 "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
constexpr double kMargin = 40.0;

std::string f(double v) { return csv::fixed(v, 4); }

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

class Svg {
 public:
  Svg(const Dimensions& d) : d_(d) {
    out_ = "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
    out_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + f(d.width) + "\" height=\"" +
            f(d.height) + "\" viewBox=\"0 0 " + f(d.width) + " " + f(d.height) + "\">\n";
    out_ += "<rect class=\"background\" x=\"0.0000\" y=\"0.0000\" width=\"" + f(d.width) + "\" height=\"" +
            f(d.height) + "\" fill=\"#ffffff\"/>\n";
  }

  void rect(std::string_view cls, double x, double y, double w, double h, std::string_view fill) {
    out_ += "<rect class=\"" + std::string(cls) + "\" x=\"" + f(x) + "\" y=\"" + f(y) + "\" width=\"" + f(w) +
            "\" height=\"" + f(h) + "\" fill=\"" + std::string(fill) + "\"/>\n";
  }
  void line(std::string_view cls, double x1, double y1, double x2, double y2, std::string_view stroke) {
    out_ += "<line class=\"" + std::string(cls) + "\" x1=\"" + f(x1) + "\" y1=\"" + f(y1) + "\" x2=\"" + f(x2) +
            "\" y2=\"" + f(y2) + "\" stroke=\"" + std::string(stroke) + "\" stroke-width=\"1.0000\"/>\n";
  }
  void circle(std::string_view cls, double cx, double cy, double r, std::string_view fill) {
    out_ += "<circle class=\"" + std::string(cls) + "\" cx=\"" + f(cx) + "\" cy=\"" + f(cy) + "\" r=\"" + f(r) +
            "\" fill=\"" + std::string(fill) + "\"/>\n";
  }
  void polyline(std::string_view cls, const std::vector<std::pair<double, double>>& pts, std::string_view stroke,
                std::string_view title) {
    out_ += "<polyline class=\"" + std::string(cls) + "\" fill=\"none\" stroke=\"" + std::string(stroke) +
            "\" stroke-width=\"1.5000\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) out_ += (i ? " " : "") + f(pts[i].first) + "," + f(pts[i].second);
    out_ += "\"><title>" + xml_escape(title) + "</title></polyline>\n";
  }
  void text(double x, double y, std::string_view s, std::string_view anchor = "start", double size = 10) {
    out_ += "<text x=\"" + f(x) + "\" y=\"" + f(y) + "\" font-family=\"sans-serif\" font-size=\"" + f(size) +
            "\" text-anchor=\"" + std::string(anchor) + "\">" + xml_escape(s) + "</text>\n";
  }
  void axes(double x0, double y0, double x1, double y1) {
    line("axis", x0, y1, x1, y1, "#000000");
    line("axis", x0, y0, x0, y1, "#000000");
  }

  std::string finish() {
    out_ += "</svg>\n";
    return std::move(out_);
  }
  const Dimensions& dims() const { return d_; }

 private:
  Dimensions d_;
  std::string out_;
};

double finite_or_zero(double v) { return std::isfinite(v) ? v : 0.0; }

std::string render_density(const DensityPlotData& data, const Dimensions& dims) {
  std::size_t bins = 0;
  for (const auto& s : data.series) bins = std::max(bins, s.counts.size());
  if (data.series.empty() || bins == 0) throw EmptyData();

  double peak = 0.0;
  for (const auto& s : data.series)
    for (double c : s.counts) peak = std::max(peak, finite_or_zero(c));

  Svg svg(dims);
  const double left = kMargin * 3, top = kMargin;
  const double plot_w = std::max(1.0, dims.width - left - kMargin);
  const double plot_h = std::max(1.0, dims.height - top - kMargin);
  const double row_h = plot_h / static_cast<double>(data.series.size());
  const double bar_w = plot_w / static_cast<double>(bins);
  svg.text(dims.width / 2, top / 2, "pattern: " + data.pattern, "middle", 12);

  for (std::size_t r = 0; r < data.series.size(); ++r) {
    const auto& s = data.series[r];
    const double base = top + row_h * static_cast<double>(r + 1);
    double total = 0.0;
    for (double c : s.counts) total += finite_or_zero(c);
    svg.text(left - 6, base - row_h / 2, s.id + " (" + f(total) + ")", "end");
    svg.line("baseline", left, base, left + plot_w, base, "#999999");
    for (std::size_t b = 0; b < s.counts.size(); ++b) {
      const double h = peak > 0 ? finite_or_zero(s.counts[b]) / peak * row_h * 0.9 : 0.0;
      svg.rect("bar", left + bar_w * static_cast<double>(b), base - h, bar_w, h, kPalette[0]);
    }
  }
  svg.axes(left, top, left + plot_w, top + plot_h);
  return svg.finish();
}

std::string render_rolling(const RollingPlotData& data, const Dimensions& dims) {
  if (data.centers.empty() || data.labels.empty()) throw EmptyData();
  if (data.distances.size() != data.labels.size() || data.predicted.size() != data.centers.size())
    throw std::invalid_argument("rolling plot data has inconsistent lengths");
  for (const auto& d : data.distances)
    if (d.size() != data.centers.size()) throw std::invalid_argument("rolling plot data has inconsistent lengths");

  const auto [xmin_it, xmax_it] = std::minmax_element(data.centers.begin(), data.centers.end());
  double xmin = *xmin_it, xmax = *xmax_it;
  if (xmax <= xmin) xmax = xmin + 1;
  double ymin = 0.0, ymax = 0.0;
  bool first = true;
  for (const auto& series : data.distances)
    for (double v : series) {
      if (!std::isfinite(v)) continue;
      ymin = first ? v : std::min(ymin, v);
      ymax = first ? v : std::max(ymax, v);
      first = false;
    }
  if (ymax <= ymin) ymax = ymin + 1;

  Svg svg(dims);
  const double left = kMargin * 1.5, top = kMargin, band_h = 14;
  const double plot_w = std::max(1.0, dims.width - left - kMargin * 3);
  const double plot_h = std::max(1.0, dims.height - top - kMargin - band_h - 10);
  auto x = [&](double v) { return left + (v - xmin) / (xmax - xmin) * plot_w; };
  auto y = [&](double v) { return top + plot_h - (finite_or_zero(v) - ymin) / (ymax - ymin) * plot_h; };

  std::map<std::string, std::size_t> color_of;
  for (std::size_t k = 0; k < data.labels.size(); ++k) color_of.emplace(data.labels[k], k);

  for (std::size_t k = 0; k < data.labels.size(); ++k) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t w = 0; w < data.centers.size(); ++w) pts.emplace_back(x(data.centers[w]), y(data.distances[k][w]));
    const char* color = kPalette[k % kPalette.size()];
    svg.polyline("series", pts, color, data.labels[k]);
    svg.rect("legend", left + plot_w + 10, top + 14.0 * static_cast<double>(k), 10, 10, color);
    svg.text(left + plot_w + 24, top + 14.0 * static_cast<double>(k) + 9, data.labels[k]);
  }

  // Predicted-label band: each window's cell spans halfway to its neighbours.
  const double band_y = top + plot_h + 10;
  for (std::size_t w = 0; w < data.centers.size(); ++w) {
    const double lo = w == 0 ? x(data.centers[w]) : (x(data.centers[w - 1]) + x(data.centers[w])) / 2;
    const double hi = w + 1 == data.centers.size() ? x(data.centers[w]) : (x(data.centers[w]) + x(data.centers[w + 1])) / 2;
    auto it = color_of.find(data.predicted[w]);
    const char* color = it == color_of.end() ? "#cccccc" : kPalette[it->second % kPalette.size()];
    svg.rect("band", lo, band_y, std::max(1.0, hi - lo), band_h, color);
  }
  svg.axes(left, top, left + plot_w, top + plot_h);
  svg.text(left, top + plot_h + band_h + 24, f(xmin));
  svg.text(left + plot_w, top + plot_h + band_h + 24, f(xmax), "end");
  svg.text(left - 4, top + 4, f(ymax), "end");
  svg.text(left - 4, top + plot_h, f(ymin), "end");
  return svg.finish();
}

std::string render_pca(const PcaPlotData& data, const Dimensions& dims) {
  if (data.documents.empty() || data.scores.size() != data.documents.size()) throw EmptyData();
  if (data.loadings.size() != data.terms.size()) throw std::invalid_argument("loadings and terms differ in length");

  double score_extent = 0.0, loading_extent = 0.0;
  for (const auto& s : data.scores) score_extent = std::max({score_extent, std::abs(s[0]), std::abs(s[1])});
  for (const auto& l : data.loadings) loading_extent = std::max({loading_extent, std::abs(l[0]), std::abs(l[1])});
  if (!(score_extent > 0)) score_extent = 1.0;
  // Loading vectors are stretched to the score extent so both are legible.
  const double stretch = loading_extent > 0 ? score_extent * 0.9 / loading_extent : 0.0;

  Svg svg(dims);
  const double half_w = (dims.width - 2 * kMargin) / 2, half_h = (dims.height - 2 * kMargin) / 2;
  const double cx = kMargin + half_w, cy = kMargin + half_h;
  auto x = [&](double v) { return cx + finite_or_zero(v) / (score_extent * 1.1) * half_w; };
  auto y = [&](double v) { return cy - finite_or_zero(v) / (score_extent * 1.1) * half_h; };

  svg.line("axis", kMargin, cy, dims.width - kMargin, cy, "#999999");
  svg.line("axis", cx, kMargin, cx, dims.height - kMargin, "#999999");
  svg.text(dims.width - kMargin, cy - 4, "PC1", "end");
  svg.text(cx + 4, kMargin + 10, "PC2");

  for (std::size_t t = 0; t < data.terms.size(); ++t) {
    const double lx = data.loadings[t][0] * stretch, ly = data.loadings[t][1] * stretch;
    svg.line("loading", cx, cy, x(lx), y(ly), kPalette[1]);
    svg.text(x(lx), y(ly) - 3, data.terms[t], "middle", 9);
  }
  for (std::size_t d = 0; d < data.documents.size(); ++d) {
    svg.circle("point", x(data.scores[d][0]), y(data.scores[d][1]), 3.5, kPalette[0]);
    svg.text(x(data.scores[d][0]) + 5, y(data.scores[d][1]) + 3, data.documents[d]);
  }
  return svg.finish();
}

std::size_t column(const csv::Table& t, std::string_view name) {
  for (std::size_t i = 0; i < t.header.size(); ++i)
    if (t.header[i] == name) return i;
  throw FormatError("CSV has no \"" + std::string(name) + "\" column");
}

double number(const std::string& cell) {
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size()) throw FormatError("not a number: \"" + cell + "\"");
    return v;
  } catch (const std::logic_error&) {
    throw FormatError("not a number: \"" + cell + "\"");
  }
}

const std::string& cell(const csv::Row& row, std::size_t i) {
  if (i >= row.size()) throw FormatError("CSV row is too short");
  return row[i];
}

std::array<double, 2> first_two(const csv::Table& t, const csv::Row& row) {
  std::array<double, 2> v{0.0, 0.0};
  v[0] = number(cell(row, column(t, "pc1")));
  if (std::find(t.header.begin(), t.header.end(), "pc2") != t.header.end()) v[1] = number(cell(row, column(t, "pc2")));
  return v;
}

}  // namespace

std::string_view to_string(PlotKind k) {
  switch (k) {
    case PlotKind::Density: return "density";
    case PlotKind::Rolling: return "rolling";
    case PlotKind::PcaScatter: return "pca-scatter";
  }
  return "";
}

PlotKind plot_kind_from_string(std::string_view name) {
  if (name == "density") return PlotKind::Density;
  if (name == "rolling") return PlotKind::Rolling;
  if (name == "pca-scatter") return PlotKind::PcaScatter;
  throw std::invalid_argument("unknown plot kind \"" + std::string(name) + "\"");
}

std::string render_plot(PlotKind kind, const PlotData& data, const Dimensions& dimensions) {
  if (!(dimensions.width > 0) || !(dimensions.height > 0)) throw std::invalid_argument("plot dimensions must be positive");
  switch (kind) {
    case PlotKind::Density:
      if (auto* d = std::get_if<DensityPlotData>(&data)) return render_density(*d, dimensions);
      break;
    case PlotKind::Rolling:
      if (auto* d = std::get_if<RollingPlotData>(&data)) return render_rolling(*d, dimensions);
      break;
    case PlotKind::PcaScatter:
      if (auto* d = std::get_if<PcaPlotData>(&data)) return render_pca(*d, dimensions);
      break;
  }
  throw std::invalid_argument("plot data does not match plot kind " + std::string(to_string(kind)));
}

DensityPlotData density_plot_data(const PatternMatchSet& matches, const DensityProfile& profile) {
  DensityPlotData out;
  out.pattern = matches.pattern;
  for (const auto& d : profile.documents) out.series.push_back({d.id, {d.counts.begin(), d.counts.end()}});
  return out;
}

RollingPlotData rolling_plot_data(const DeltaProfile& profile) {
  RollingPlotData out;
  out.labels = profile.labels;
  out.distances.assign(profile.labels.size(), {});
  for (const auto& w : profile.windows) {
    out.centers.push_back(w.center);
    out.predicted.push_back(w.predicted);
    for (std::size_t k = 0; k < w.distances.size() && k < out.distances.size(); ++k) out.distances[k].push_back(w.distances[k]);
  }
  return out;
}

PcaPlotData pca_plot_data(const FeatureMatrix& features, const PcaResult& pca) {
  PcaPlotData out;
  out.documents = features.documents;
  out.terms = features.terms;
  for (Eigen::Index d = 0; d < pca.scores.rows(); ++d)
    out.scores.push_back({pca.scores(d, 0), pca.scores.cols() > 1 ? pca.scores(d, 1) : 0.0});
  for (Eigen::Index t = 0; t < pca.loadings.rows(); ++t)
    out.loadings.push_back({pca.loadings(t, 0), pca.loadings.cols() > 1 ? pca.loadings(t, 1) : 0.0});
  return out;
}

DensityPlotData density_plot_data(const csv::Table& t) {
  DensityPlotData out;
  const auto id = column(t, "id");
  const auto pattern = column(t, "pattern");
  std::vector<std::size_t> bins;
  for (std::size_t i = 0; i < t.header.size(); ++i)
    if (t.header[i].rfind("bin_", 0) == 0) bins.push_back(i);
  for (const auto& row : t.rows) {
    out.pattern = cell(row, pattern);
    DensitySeries s{cell(row, id), {}};
    for (auto b : bins) s.counts.push_back(number(cell(row, b)));
    out.series.push_back(std::move(s));
  }
  return out;
}

RollingPlotData rolling_plot_data(const csv::Table& t) {
  RollingPlotData out;
  const auto center = column(t, "window_center");
  const auto label = column(t, "label");
  std::vector<std::size_t> cols;
  for (std::size_t i = center + 1; i < label; ++i) {
    out.labels.push_back(t.header[i]);
    cols.push_back(i);
  }
  out.distances.assign(cols.size(), {});
  for (const auto& row : t.rows) {
    out.centers.push_back(number(cell(row, center)));
    out.predicted.push_back(cell(row, label));
    for (std::size_t k = 0; k < cols.size(); ++k) out.distances[k].push_back(number(cell(row, cols[k])));
  }
  return out;
}

PcaPlotData pca_plot_data(const csv::Table& scores, const csv::Table& loadings) {
  PcaPlotData out;
  const auto id = column(scores, "id");
  for (const auto& row : scores.rows) {
    out.documents.push_back(cell(row, id));
    out.scores.push_back(first_two(scores, row));
  }
  const auto term = column(loadings, "term");
  for (const auto& row : loadings.rows) {
    out.terms.push_back(cell(row, term));
    out.loadings.push_back(first_two(loadings, row));
  }
  return out;
}

}  // namespace scriptorium
