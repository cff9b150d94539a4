#pragma once

#include <string>
#include <vector>

namespace sclab {

struct SvgSeries {
  std::string label;
  std::string color;
  std::vector<std::pair<double, double>> points;
};

/// Minimal self-contained SVG line chart (axes, ticks, legend).
void write_svg_chart(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<SvgSeries>& series);

}  // namespace sclab
