#include "lpbias/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lpbias/text_format.hpp"

namespace lpbias {
namespace {

constexpr double kWidth = 720;
constexpr double kHeight = 460;
constexpr double kLeft = 70;
constexpr double kRight = 200;
constexpr double kTop = 40;
constexpr double kBottom = 60;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

std::string num(double v) { return format_fixed(v, 2); }

}  // namespace

std::string render_line_plot(const PlotSpec& spec) {
  double x_min = INFINITY;
  double x_max = -INFINITY;
  for (const auto& s : spec.series) {
    for (double x : s.x) {
      if (spec.log_x && x <= 0) continue;
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
    }
  }
  if (!std::isfinite(x_min)) {
    x_min = 1;
    x_max = 10;
  }
  if (x_max <= x_min) x_max = x_min + 1;
  auto tx = [&](double x) {
    const double t = spec.log_x ? (std::log10(x) - std::log10(x_min)) / (std::log10(x_max) - std::log10(x_min))
                                : (x - x_min) / (x_max - x_min);
    return kLeft + t * (kWidth - kLeft - kRight);
  };
  const double y_span = spec.y_max > spec.y_min ? spec.y_max - spec.y_min : 1.0;
  auto ty = [&](double y) {
    const double t = (std::clamp(y, spec.y_min, spec.y_max) - spec.y_min) / y_span;
    return kHeight - kBottom - t * (kHeight - kTop - kBottom);
  };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << num((kWidth - kRight + kLeft) / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
    << escape(spec.title) << "</text>\n";

  // axes and grid
  const double x0 = kLeft;
  const double x1 = kWidth - kRight;
  const double y0 = kHeight - kBottom;
  const double y1 = kTop;
  o << "<g stroke=\"#ddd\">\n";
  for (int i = 0; i <= 5; ++i) {
    const double yv = spec.y_min + y_span * i / 5.0;
    o << "<line x1=\"" << num(x0) << "\" y1=\"" << num(ty(yv)) << "\" x2=\"" << num(x1) << "\" y2=\""
      << num(ty(yv)) << "\"/>\n";
  }
  o << "</g>\n";
  for (int i = 0; i <= 5; ++i) {
    const double yv = spec.y_min + y_span * i / 5.0;
    o << "<text x=\"" << num(x0 - 6) << "\" y=\"" << num(ty(yv) + 4) << "\" text-anchor=\"end\">"
      << format_fixed(yv, 2) << "</text>\n";
  }
  if (spec.log_x) {
    for (double d = std::pow(10.0, std::floor(std::log10(x_min))); d <= x_max * 1.0001; d *= 10) {
      if (d < x_min) continue;
      o << "<line x1=\"" << num(tx(d)) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(tx(d)) << "\" y2=\""
        << num(y0 + 5) << "\" stroke=\"black\"/>\n";
      o << "<text x=\"" << num(tx(d)) << "\" y=\"" << num(y0 + 18) << "\" text-anchor=\"middle\">"
        << format_fixed(d, 0) << "</text>\n";
    }
  } else {
    for (int i = 0; i <= 5; ++i) {
      const double xv = x_min + (x_max - x_min) * i / 5.0;
      o << "<text x=\"" << num(tx(xv)) << "\" y=\"" << num(y0 + 18) << "\" text-anchor=\"middle\">"
        << format_fixed(xv, 0) << "</text>\n";
    }
  }
  o << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x1) << "\" y2=\"" << num(y0)
    << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x0) << "\" y2=\"" << num(y1)
    << "\" stroke=\"black\"/>\n";
  o << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(kHeight - 18) << "\" text-anchor=\"middle\">"
    << escape(spec.x_label) << "</text>\n";
  o << "<text transform=\"translate(18," << num((y0 + y1) / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
    << escape(spec.y_label) << "</text>\n";

  for (std::size_t s = 0; s < spec.series.size(); ++s) {
    const auto& series = spec.series[s];
    const char* color = kPalette[s % std::size(kPalette)];
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\""
      << (series.dashed ? " stroke-dasharray=\"6 4\"" : "") << " points=\"";
    for (std::size_t i = 0; i < series.x.size(); ++i) {
      if (spec.log_x && series.x[i] <= 0) continue;
      o << num(tx(series.x[i])) << ',' << num(ty(series.y[i])) << ' ';
    }
    o << "\"/>\n";
    const double ly = kTop + 16.0 * static_cast<double>(s);
    o << "<line x1=\"" << num(x1 + 12) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(x1 + 36) << "\" y2=\""
      << num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\""
      << (series.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
    o << "<text x=\"" << num(x1 + 42) << "\" y=\"" << num(ly + 4) << "\">" << escape(series.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace lpbias
