#include "sclab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sclab {

namespace {

double nice_step(double span) {
  if (span <= 0.0) return 1.0;
  const double raw = span / 8.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0})
    if (raw <= m * mag) return m * mag;
  return 10.0 * mag;
}

std::string fmt(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

}  // namespace

void write_svg_chart(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<SvgSeries>& series) {
  double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
  bool first = true;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      if (first) {
        x_min = x_max = x;
        y_min = y_max = y;
        first = false;
      }
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  if (x_max == x_min) x_max = x_min + 1.0;
  if (y_max == y_min) y_max = y_min + 1.0;
  y_min = std::min(y_min, 0.0);
  y_max = std::max(y_max, 1.0);

  const double width = 800, height = 500;
  const double ml = 70, mr = 160, mt = 40, mb = 55;
  auto px = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * (width - ml - mr); };
  auto py = [&](double y) { return height - mb - (y - y_min) / (y_max - y_min) * (height - mt - mb); };

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_svg_chart: cannot open " + path);
  out << "<svg xmlns='http://www.w3.org/2000/svg' viewBox='0 0 " << width << ' ' << height
      << "' font-family='sans-serif' font-size='13'>\n"
      << "<rect width='100%' height='100%' fill='white'/>\n"
      << "<text x='" << width / 2 << "' y='22' text-anchor='middle' font-size='16'>" << title
      << "</text>\n";

  const double xs = nice_step(x_max - x_min);
  for (double x = std::ceil(x_min / xs) * xs; x <= x_max + 1e-9; x += xs) {
    out << "<line x1='" << px(x) << "' y1='" << py(y_min) << "' x2='" << px(x) << "' y2='"
        << py(y_max) << "' stroke='#eeeeee'/>\n"
        << "<text x='" << px(x) << "' y='" << height - mb + 18
        << "' text-anchor='middle'>" << fmt(x) << "</text>\n";
  }
  const double ys = nice_step(y_max - y_min);
  for (double y = std::ceil(y_min / ys) * ys; y <= y_max + 1e-9; y += ys) {
    out << "<line x1='" << px(x_min) << "' y1='" << py(y) << "' x2='" << px(x_max) << "' y2='"
        << py(y) << "' stroke='#eeeeee'/>\n"
        << "<text x='" << ml - 8 << "' y='" << py(y) + 4 << "' text-anchor='end'>" << fmt(y)
        << "</text>\n";
  }
  out << "<line x1='" << ml << "' y1='" << py(y_min) << "' x2='" << width - mr << "' y2='"
      << py(y_min) << "' stroke='black'/>\n"
      << "<line x1='" << ml << "' y1='" << py(y_min) << "' x2='" << ml << "' y2='" << mt
      << "' stroke='black'/>\n"
      << "<text x='" << (ml + width - mr) / 2 << "' y='" << height - 12
      << "' text-anchor='middle'>" << x_label << "</text>\n"
      << "<text x='18' y='" << (mt + height - mb) / 2 << "' text-anchor='middle' transform='rotate(-90 18 "
      << (mt + height - mb) / 2 << ")'>" << y_label << "</text>\n";

  double legend_y = mt + 10;
  for (const auto& s : series) {
    out << "<polyline fill='none' stroke='" << s.color << "' stroke-width='1.6' points='";
    for (const auto& [x, y] : s.points) out << px(x) << ',' << py(y) << ' ';
    out << "'/>\n"
        << "<line x1='" << width - mr + 12 << "' y1='" << legend_y << "' x2='" << width - mr + 36
        << "' y2='" << legend_y << "' stroke='" << s.color << "' stroke-width='1.6'/>\n"
        << "<text x='" << width - mr + 42 << "' y='" << legend_y + 4 << "'>" << s.label
        << "</text>\n";
    legend_y += 20;
  }
  out << "</svg>\n";
}

}  // namespace sclab
