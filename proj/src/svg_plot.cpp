#include "stein_pairs/svg_plot.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "stein_pairs/error.hpp"

namespace stein_pairs::svg {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 64.0;

std::string fixed(double v, int digits = 2) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
  if (ec != std::errc()) return "0";
  return std::string(buf, ptr);
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axis {
  double lo, hi;  // log10 range
  double pixel_lo, pixel_hi;
  double map(double log_v) const { return pixel_lo + (log_v - lo) / (hi - lo) * (pixel_hi - pixel_lo); }
};

Axis make_axis(const std::vector<double>& v, double pixel_lo, double pixel_hi) {
  double lo = std::log10(*std::min_element(v.begin(), v.end()));
  double hi = std::log10(*std::max_element(v.begin(), v.end()));
  if (hi - lo < 1e-9) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad, pixel_lo, pixel_hi};
}

}  // namespace

std::string render(const LogLogPlot& plot) {
  if (plot.x.empty() || plot.x.size() != plot.y.size())
    throw ParameterError("plot needs equally many x and y values");
  for (std::size_t i = 0; i < plot.x.size(); ++i)
    if (!(plot.x[i] > 0.0) || !(plot.y[i] > 0.0)) throw ParameterError("log-log plot needs positive data");

  const Axis ax = make_axis(plot.x, kMargin, kWidth - kMargin);
  const Axis ay = make_axis(plot.y, kHeight - kMargin, kMargin);
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(kWidth, 0) << "\" height=\""
    << fixed(kHeight, 0) << "\" viewBox=\"0 0 " << fixed(kWidth, 0) << ' ' << fixed(kHeight, 0) << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << fixed(kWidth / 2) << "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"16\">" << escape(plot.title) << "</text>\n";
  s << "<rect x=\"" << fixed(kMargin) << "\" y=\"" << fixed(kMargin) << "\" width=\""
    << fixed(kWidth - 2 * kMargin) << "\" height=\"" << fixed(kHeight - 2 * kMargin)
    << "\" fill=\"none\" stroke=\"black\"/>\n";

  // Decade ticks.
  const auto ticks = [&](const Axis& a, bool horizontal) {
    for (int e = static_cast<int>(std::ceil(a.lo)); e <= static_cast<int>(std::floor(a.hi)); ++e) {
      const double p = a.map(e);
      if (horizontal) {
        s << "<line x1=\"" << fixed(p) << "\" y1=\"" << fixed(kHeight - kMargin) << "\" x2=\"" << fixed(p)
          << "\" y2=\"" << fixed(kHeight - kMargin + 6) << "\" stroke=\"black\"/>\n";
        s << "<text x=\"" << fixed(p) << "\" y=\"" << fixed(kHeight - kMargin + 20)
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">1e" << e << "</text>\n";
      } else {
        s << "<line x1=\"" << fixed(kMargin - 6) << "\" y1=\"" << fixed(p) << "\" x2=\"" << fixed(kMargin)
          << "\" y2=\"" << fixed(p) << "\" stroke=\"black\"/>\n";
        s << "<text x=\"" << fixed(kMargin - 8) << "\" y=\"" << fixed(p + 4)
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">1e" << e << "</text>\n";
      }
    }
  };
  ticks(ax, true);
  ticks(ay, false);
  s << "<text x=\"" << fixed(kWidth / 2) << "\" y=\"" << fixed(kHeight - 16)
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << escape(plot.x_label)
    << "</text>\n";
  s << "<text x=\"18\" y=\"" << fixed(kHeight / 2) << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"13\" transform=\"rotate(-90 18 " << fixed(kHeight / 2) << ")\">" << escape(plot.y_label)
    << "</text>\n";

  s << "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < plot.x.size(); ++i) {
    if (i) s << ' ';
    s << fixed(ax.map(std::log10(plot.x[i]))) << ',' << fixed(ay.map(std::log10(plot.y[i])));
  }
  s << "\"/>\n";
  for (std::size_t i = 0; i < plot.x.size(); ++i)
    s << "<circle cx=\"" << fixed(ax.map(std::log10(plot.x[i]))) << "\" cy=\""
      << fixed(ay.map(std::log10(plot.y[i]))) << "\" r=\"3\" fill=\"#1f5fa8\"/>\n";

  if (plot.slope) {
    // Least-squares line through the centroid of the log data.
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < plot.x.size(); ++i) {
      mx += std::log10(plot.x[i]);
      my += std::log10(plot.y[i]);
    }
    mx /= static_cast<double>(plot.x.size());
    my /= static_cast<double>(plot.x.size());
    const double x0 = std::log10(*std::min_element(plot.x.begin(), plot.x.end()));
    const double x1 = std::log10(*std::max_element(plot.x.begin(), plot.x.end()));
    const double y0 = my + *plot.slope * (x0 - mx);
    const double y1 = my + *plot.slope * (x1 - mx);
    s << "<line x1=\"" << fixed(ax.map(x0)) << "\" y1=\"" << fixed(ay.map(y0)) << "\" x2=\"" << fixed(ax.map(x1))
      << "\" y2=\"" << fixed(ay.map(y1)) << "\" stroke=\"#c0392b\" stroke-dasharray=\"6 4\"/>\n";
    s << "<text x=\"" << fixed(kWidth - kMargin - 8) << "\" y=\"" << fixed(kMargin + 20)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"13\" fill=\"#c0392b\">slope = "
      << fixed(*plot.slope, 3) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace stein_pairs::svg
