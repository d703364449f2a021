#pragma once

// Minimal hand-rolled SVG line charts: axes, ticks, polylines, legend.

#include <string>
#include <utility>
#include <vector>

namespace lmsv {

struct SvgSeries {
  std::string label;
  std::string color;
  std::vector<std::pair<double, double>> points;
  bool dashed = false;
};

std::string render_svg_chart(const std::string& title, const std::string& x_label,
                             const std::string& y_label, const std::vector<SvgSeries>& series);

void write_svg_chart(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<SvgSeries>& series);

// Series color convention for memory parameters:
// d = 0 black, d = 0.2 blue, d = 0.4 red, d = 0.45 green; palette otherwise.
std::string color_for_d(double d, std::size_t index);

}  // namespace lmsv
