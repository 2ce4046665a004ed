#pragma once

#include <string>
#include <vector>

namespace lpbias {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = true;
  double y_min = 0.0;
  double y_max = 1.0;
  std::vector<PlotSeries> series;
};

/// Self-contained SVG line chart with a legend. Output carries no timestamps.
std::string render_line_plot(const PlotSpec& spec);

}  // namespace lpbias
