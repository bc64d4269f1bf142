#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace segfuse::svg {

namespace {

constexpr int kPlotWidth = 480;
constexpr int kPlotHeight = 360;
constexpr int kMarginLeft = 60;
constexpr int kMarginRight = 16;
constexpr int kMarginTop = 34;
constexpr int kMarginBottom = 46;

std::string num(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.2f", v);
  return buffer;
}

std::string tick_label(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.4g", v);
  return buffer;
}

}  // namespace

std::string line_plot(const std::string& title, const std::string& x_label,
                      const std::string& y_label, const Series& series,
                      AxisRange x_range, AxisRange y_range) {
  double x_span = x_range.hi - x_range.lo;
  double y_span = y_range.hi - y_range.lo;
  if (x_span <= 0) x_span = 1.0;
  if (y_span <= 0) y_span = 1.0;

  const double plot_w = kPlotWidth - kMarginLeft - kMarginRight;
  const double plot_h = kPlotHeight - kMarginTop - kMarginBottom;
  auto to_px = [&](double x, double y) {
    double px = kMarginLeft + (x - x_range.lo) / x_span * plot_w;
    double py = kPlotHeight - kMarginBottom - (y - y_range.lo) / y_span * plot_h;
    return std::pair<double, double>(px, py);
  };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(kPlotWidth) + "\" height=\"" +
         std::to_string(kPlotHeight) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + std::to_string(kPlotWidth / 2) +
         "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\">" + title + "</text>\n";

  // axes
  auto [x0, y0] = to_px(x_range.lo, y_range.lo);
  auto [x1, y1] = to_px(x_range.hi, y_range.hi);
  out += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" +
         num(x1) + "\" y2=\"" + num(y0) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" +
         num(x0) + "\" y2=\"" + num(y1) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";

  for (int i = 0; i <= 4; ++i) {
    double fx = x_range.lo + x_span * i / 4.0;
    double fy = y_range.lo + y_span * i / 4.0;
    auto [tx, _ty] = to_px(fx, y_range.lo);
    auto [_tx, ty] = to_px(x_range.lo, fy);
    out += "<line x1=\"" + num(tx) + "\" y1=\"" + num(y0) + "\" x2=\"" +
           num(tx) + "\" y2=\"" + num(y0 + 4) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + num(tx) + "\" y=\"" + num(y0 + 18) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"10\">" + tick_label(fx) + "</text>\n";
    out += "<line x1=\"" + num(x0 - 4) + "\" y1=\"" + num(ty) + "\" x2=\"" +
           num(x0) + "\" y2=\"" + num(ty) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + num(x0 - 7) + "\" y=\"" + num(ty + 3) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"10\">" + tick_label(fy) + "</text>\n";
  }

  out += "<text x=\"" + std::to_string(kPlotWidth / 2) + "\" y=\"" +
         std::to_string(kPlotHeight - 8) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\">" + x_label + "</text>\n";
  out += "<text x=\"14\" y=\"" + std::to_string(kPlotHeight / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\" transform=\"rotate(-90 14 " +
         std::to_string(kPlotHeight / 2) + ")\">" + y_label + "</text>\n";

  if (series.points.empty()) {
    out += "<text x=\"" + std::to_string(kPlotWidth / 2) + "\" y=\"" +
           std::to_string(kPlotHeight / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\" fill=\"#888888\">no data</text>\n";
  } else {
    std::string points;
    for (const auto& [x, y] : series.points) {
      auto [px, py] = to_px(std::clamp(x, x_range.lo, x_range.hi),
                            std::clamp(y, y_range.lo, y_range.hi));
      if (!points.empty()) points += " ";
      points += num(px) + "," + num(py);
    }
    out += "<polyline fill=\"none\" stroke=\"#1f6fb4\" stroke-width=\"1.5\" "
           "points=\"" + points + "\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string panel_row(const std::vector<std::string>& plots) {
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(kPlotWidth * plots.size()) + "\" height=\"" +
         std::to_string(kPlotHeight) + "\">\n";
  for (std::size_t i = 0; i < plots.size(); ++i) {
    std::string panel = plots[i];
    auto pos = panel.find("<svg ");
    if (pos != std::string::npos) {
      panel.insert(pos + 5, "x=\"" + std::to_string(kPlotWidth * i) + "\" ");
    }
    out += panel;
  }
  out += "</svg>\n";
  return out;
}

std::string heatmap(const Heatmap& map) {
  int longest = std::max(map.grid_width, map.grid_height);
  int cell = longest > 0 ? std::clamp(800 / longest, 1, 16) : 1;
  int width = map.grid_width * cell;
  int height = map.grid_height * cell;

  double max_abs = 0.0;
  for (const auto& v : map.values) {
    if (v) max_abs = std::max(max_abs, std::abs(*v));
  }

  auto color = [&](double v) {
    double t = max_abs > 0.0 ? v / max_abs : 0.0;
    int r = 255, g = 255, b = 255;
    if (t > 0) {  // towards red
      r = 255 + static_cast<int>(std::lround(t * (178 - 255)));
      g = 255 + static_cast<int>(std::lround(t * (24 - 255)));
      b = 255 + static_cast<int>(std::lround(t * (43 - 255)));
    } else if (t < 0) {  // towards blue
      r = 255 + static_cast<int>(std::lround(-t * (33 - 255)));
      g = 255 + static_cast<int>(std::lround(-t * (102 - 255)));
      b = 255 + static_cast<int>(std::lround(-t * (172 - 255)));
    }
    char buffer[16];
    std::snprintf(buffer, sizeof(buffer), "#%02x%02x%02x", r, g, b);
    return std::string(buffer);
  };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(width) + "\" height=\"" + std::to_string(height) +
         "\">\n";
  for (int row = 0; row < map.grid_height; ++row) {
    for (int col = 0; col < map.grid_width; ++col) {
      const auto& v = map.at(col, row);
      std::string fill = v ? color(*v) : std::string("#b0b0b0");
      out += "<rect x=\"" + std::to_string(col * cell) + "\" y=\"" +
             std::to_string(row * cell) + "\" width=\"" +
             std::to_string(cell) + "\" height=\"" + std::to_string(cell) +
             "\" fill=\"" + fill + "\"/>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace segfuse::svg
