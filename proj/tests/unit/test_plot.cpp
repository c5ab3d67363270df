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

#include <doctest.h>

#include <expat.h>

#include <map>

#include "scriptorium/errors.hpp"
#include "scriptorium/plot.hpp"
#include "support/testing.hpp"

using namespace scriptorium;

namespace {

// Element counts by "name.class", or empty when the document is not well formed.
std::map<std::string, int> census(const std::string& svg) {
  std::map<std::string, int> counts;
  XML_Parser p = XML_ParserCreate("UTF-8");
  XML_SetUserData(p, &counts);
  XML_SetStartElementHandler(p, [](void* data, const XML_Char* name, const XML_Char** attrs) {
    std::string key = name;
    for (int i = 0; attrs[i]; i += 2)
      if (std::string(attrs[i]) == "class") key += "." + std::string(attrs[i + 1]);
    ++(*static_cast<std::map<std::string, int>*>(data))[key];
  });
  const bool ok = XML_Parse(p, svg.data(), static_cast<int>(svg.size()), 1) == XML_STATUS_OK;
  XML_ParserFree(p);
  if (!ok) counts.clear();
  return counts;
}

DensityPlotData density() { return {"ðn*", {{"a", {0, 2, 1}}, {"b", {4, 0, 0}}}}; }

RollingPlotData rolling() {
  return {{"A", "B"}, {750, 1050, 1350}, {{0.5, 0.7, 1.2}, {1.1, 0.9, 0.4}}, {"A", "B", "B"}};
}

PcaPlotData scatter() {
  return {{"d1", "d2", "d3"}, {{{1.0, 0.5}}, {{-0.5, 0.2}}, {{-0.5, -0.7}}}, {"7", "et"}, {{{0.7, 0.1}}, {{-0.7, 0.1}}}};
}

}  // namespace

TEST_CASE("density bars") {
  const auto svg = render_plot(PlotKind::Density, density());
  CHECK(svg.rfind("<?xml", 0) == 0);
  const auto c = census(svg);
  REQUIRE_FALSE(c.empty());
  CHECK(c.at("svg") == 1);
  CHECK(c.at("rect.bar") == 6);  // zero bins included
}

TEST_CASE("rolling lines and bands") {
  const auto c = census(render_plot(PlotKind::Rolling, rolling()));
  REQUIRE_FALSE(c.empty());
  CHECK(c.at("polyline.series") == 2);
  CHECK(c.at("rect.band") == 3);
}

TEST_CASE("pca scatter with loading vectors") {
  const auto c = census(render_plot(PlotKind::PcaScatter, scatter()));
  REQUIRE_FALSE(c.empty());
  CHECK(c.at("circle.point") == 3);
  CHECK(c.at("line.loading") == 2);
}

TEST_CASE("labels are escaped") {
  auto d = density();
  d.series[0].id = "a<&\"b";
  CHECK_FALSE(census(render_plot(PlotKind::Density, d)).empty());
}

TEST_CASE("identical input, identical bytes") {
  CHECK(render_plot(PlotKind::Rolling, rolling()) == render_plot(PlotKind::Rolling, rolling()));
  CHECK(render_plot(PlotKind::PcaScatter, scatter(), {640, 480}) ==
        render_plot(PlotKind::PcaScatter, scatter(), {640, 480}));
  const auto svg = render_plot(PlotKind::Density, density());
  CHECK(svg.find("800.0000") != std::string::npos);  // fixed four decimals
}

TEST_CASE("bad input") {
  CHECK_THROWS_AS(render_plot(PlotKind::Density, DensityPlotData{}), EmptyData);
  CHECK_THROWS_AS(render_plot(PlotKind::Density, rolling()), std::invalid_argument);
  CHECK_THROWS_AS(render_plot(PlotKind::Density, density(), {0, 10}), std::invalid_argument);
  auto r = rolling();
  r.distances[1].pop_back();
  CHECK_THROWS_AS(render_plot(PlotKind::Rolling, r), std::invalid_argument);
  CHECK_THROWS_AS(plot_kind_from_string("pie"), std::invalid_argument);
  CHECK(plot_kind_from_string("pca-scatter") == PlotKind::PcaScatter);
}

TEST_CASE("plot data from CSV exports") {
  const auto dens = density_plot_data(csv::parse("id,pattern,tokens,matches,bin_0,bin_1\na,x*,4,2,1,1\n"));
  CHECK(dens.pattern == "x*");
  CHECK(dens.series[0].counts == std::vector<double>{1, 1});

  const auto roll = rolling_plot_data(
      csv::parse("window_start,window_end,window_center,A,B,label,tie\n0,10,5.0,0.1,0.2,A,0\n5,15,10.0,0.3,0.2,B,0\n"));
  CHECK(roll.labels == std::vector<std::string>{"A", "B"});
  CHECK(roll.distances[1] == std::vector<double>{0.2, 0.2});
  CHECK(roll.predicted == std::vector<std::string>{"A", "B"});

  const auto pc = pca_plot_data(csv::parse("id,pc1,pc2\nd,1,2\n"), csv::parse("term,pc1,pc2\n7,0.5,0.5\n"));
  CHECK(pc.scores[0][1] == 2.0);
  CHECK(pc.terms == std::vector<std::string>{"7"});

  CHECK_THROWS_AS(density_plot_data(csv::parse("id,bin_0\na,zz\n")), FormatError);
  CHECK_THROWS_AS(rolling_plot_data(csv::parse("a,b\n1,2\n")), FormatError);
}
