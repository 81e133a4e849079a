#pragma once

#include <optional>
#include <string>
#include <vector>

namespace radialwave {

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  std::optional<double> marker_x;  // dashed vertical line
  std::string marker_label;
};

/// Standalone SVG line plot. The text depends only on the inputs (fixed number
/// formatting, no timestamps). Non-positive values are skipped on a log axis.
std::string line_plot_svg(const std::vector<PlotSeries>& series, const PlotOptions& options);

}  // namespace radialwave
