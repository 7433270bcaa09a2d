#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace cvnn::cli {

namespace {

constexpr double kWidth = 760.0;
constexpr double kHeight = 520.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 24.0;
constexpr double kTop = 48.0;
constexpr double kBottom = 64.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
                          "#8c564b", "#e377c2"};

std::string fmt(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

std::string pow10_label(int exponent) {
  std::ostringstream out;
  if (exponent >= 0 && exponent < 7) {
    out << std::llround(std::pow(10.0, exponent));
  } else {
    out << "1e" << exponent;
  }
  return out.str();
}

}  // namespace

std::string render_loglog_svg(const std::string& title, const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<PlotSeries>& series) {
  double min_x = std::numeric_limits<double>::max();
  double max_x = std::numeric_limits<double>::lowest();
  double min_y = min_x;
  double max_y = max_x;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      min_x = std::min(min_x, std::log10(x));
      max_x = std::max(max_x, std::log10(x));
      min_y = std::min(min_y, std::log10(y));
      max_y = std::max(max_y, std::log10(y));
    }
  }
  if (min_x > max_x) {  // no points: render an empty frame
    min_x = 0.0;
    max_x = 1.0;
    min_y = 0.0;
    max_y = 1.0;
  }
  if (max_x - min_x < 1e-9) max_x = min_x + 1.0;
  if (max_y - min_y < 1e-9) max_y = min_y + 1.0;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const auto sx = [&](double lx) { return kLeft + (lx - min_x) / (max_x - min_x) * plot_w; };
  const auto sy = [&](double ly) { return kTop + (max_y - ly) / (max_y - min_y) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
         "font-family=\"sans-serif\">"
      << title << "</text>\n";

  // Decade grid.
  for (int e = static_cast<int>(std::ceil(min_x)); e <= static_cast<int>(std::floor(max_x)); ++e) {
    const double x = sx(e);
    svg << "<line x1=\"" << fmt(x) << "\" y1=\"" << kTop << "\" x2=\"" << fmt(x) << "\" y2=\""
        << kTop + plot_h << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << fmt(x) << "\" y=\"" << kTop + plot_h + 18
        << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">"
        << pow10_label(e) << "</text>\n";
  }
  for (int e = static_cast<int>(std::ceil(min_y)); e <= static_cast<int>(std::floor(max_y)); ++e) {
    const double y = sy(e);
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << fmt(y) << "\" x2=\"" << kLeft + plot_w
        << "\" y2=\"" << fmt(y) << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << fmt(y + 4)
        << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << pow10_label(e)
        << "</text>\n";
  }

  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w << "\" height=\""
      << plot_h << "\" fill=\"none\" stroke=\"#333333\"/>\n";
  svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 16
      << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" << x_label
      << "</text>\n";
  svg << "<text x=\"18\" y=\"" << kTop + plot_h / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
         "transform=\"rotate(-90 18 "
      << kTop + plot_h / 2 << ")\">" << y_label << "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
    for (const auto& [x, y] : series[i].points) {
      svg << fmt(sx(std::log10(x))) << "," << fmt(sy(std::log10(y))) << " ";
    }
    svg << "\"/>\n";
    const double ly = kTop + 16 + 16 * static_cast<double>(i);
    svg << "<line x1=\"" << kLeft + 10 << "\" y1=\"" << fmt(ly - 4) << "\" x2=\"" << kLeft + 34
        << "\" y2=\"" << fmt(ly - 4) << "\" stroke=\"" << color << "\" stroke-width=\"1.8\"/>\n";
    svg << "<text x=\"" << kLeft + 40 << "\" y=\"" << fmt(ly)
        << "\" font-size=\"12\" font-family=\"sans-serif\">" << series[i].label << "</text>\n";
  }

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace cvnn::cli
