#pragma once

#include <string>
#include <utility>
#include <vector>

namespace hyperem {

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct PlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
};

/// Line chart, viewBox 0 0 1000 600, one polyline per series, axes autoscaled to the data.
std::string render_svg(const std::vector<PlotSeries>& series, const PlotOptions& options);

}  // namespace hyperem
