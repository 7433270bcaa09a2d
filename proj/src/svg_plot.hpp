#pragma once

#include <string>
#include <utility>
#include <vector>

namespace cvnn::cli {

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (x, y), both > 0
};

/// Static log-log chart: decade grid, one polyline per series, legend.
[[nodiscard]] std::string render_loglog_svg(const std::string& title, const std::string& x_label,
                                            const std::string& y_label,
                                            const std::vector<PlotSeries>& series);

}  // namespace cvnn::cli
