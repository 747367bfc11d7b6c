#pragma once

#include <string>
#include <utility>
#include <vector>

namespace rankdiff {

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  int width = 720;
  int height = 480;
};

// Minimal self-contained SVG line plot: axes, decade ticks on log scales,
// one polyline per series, inline legend.  Points that cannot be placed on
// a log axis (non-positive values) are dropped.
void write_svg_plot(const std::string& path, const PlotSpec& spec,
                    const std::vector<PlotSeries>& series);

}  // namespace rankdiff
