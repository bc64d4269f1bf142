#pragma once

#include <string>
#include <vector>

#include "segfuse/occlusion.hpp"

namespace segfuse::svg {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct AxisRange {
  double lo = 0.0;
  double hi = 1.0;
};

// One line plot as a complete SVG document.
std::string line_plot(const std::string& title, const std::string& x_label,
                      const std::string& y_label, const Series& series,
                      AxisRange x_range, AxisRange y_range);

// Several plots side by side in a single document.
std::string panel_row(const std::vector<std::string>& plots);

// Cell grid with a diverging blue/white/red scale centered at zero; cells
// without a value are drawn grey.
std::string heatmap(const Heatmap& map);

}  // namespace segfuse::svg
