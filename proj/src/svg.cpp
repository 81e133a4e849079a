#include "radialwave/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace radialwave {

namespace {

constexpr double kWidth = 720.0, kHeight = 440.0;
constexpr double kLeft = 80.0, kRight = 170.0, kTop = 40.0, kBottom = 60.0;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string line_plot_svg(const std::vector<PlotSeries>& series, const PlotOptions& options) {
  auto ty = [&](double y) { return options.log_y ? std::log10(y) : y; };
  auto usable = [&](double y) { return std::isfinite(y) && (!options.log_y || y > 0.0); };

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!usable(s.y[i]) || !std::isfinite(s.x[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  }
  if (!(x0 <= x1)) x0 = 0.0, x1 = 1.0;
  if (!(y0 <= y1)) y0 = 0.0, y1 = 1.0;
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return kTop + (1.0 - (ty(y) - y0) / (y1 - y0)) * ph; };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt("%.0f", kWidth) + "\" height=\"" +
         fmt("%.0f", kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + fmt("%.1f", kLeft + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" +
         escape(options.title) + "</text>\n";
  out += "<rect x=\"" + fmt("%.1f", kLeft) + "\" y=\"" + fmt("%.1f", kTop) + "\" width=\"" + fmt("%.1f", pw) +
         "\" height=\"" + fmt("%.1f", ph) + "\" fill=\"none\" stroke=\"black\"/>\n";

  // ticks: 5 intervals on each axis; log axes are labelled with powers of ten
  for (int k = 0; k <= 5; ++k) {
    const double xv = x0 + (x1 - x0) * k / 5.0;
    const double X = px(xv);
    out += "<line x1=\"" + fmt("%.1f", X) + "\" y1=\"" + fmt("%.1f", kTop + ph) + "\" x2=\"" + fmt("%.1f", X) +
           "\" y2=\"" + fmt("%.1f", kTop + ph + 5) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + fmt("%.1f", X) + "\" y=\"" + fmt("%.1f", kTop + ph + 18) + "\" text-anchor=\"middle\">" +
           fmt("%.3g", xv) + "</text>\n";
    const double yt = y0 + (y1 - y0) * k / 5.0;
    const double Y = kTop + (1.0 - k / 5.0) * ph;
    const std::string label = options.log_y ? "1e" + fmt("%.1f", yt) : fmt("%.3g", yt);
    out += "<line x1=\"" + fmt("%.1f", kLeft - 5) + "\" y1=\"" + fmt("%.1f", Y) + "\" x2=\"" + fmt("%.1f", kLeft) +
           "\" y2=\"" + fmt("%.1f", Y) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + fmt("%.1f", kLeft - 8) + "\" y=\"" + fmt("%.1f", Y + 4) + "\" text-anchor=\"end\">" +
           label + "</text>\n";
  }
  out += "<text x=\"" + fmt("%.1f", kLeft + pw / 2) + "\" y=\"" + fmt("%.1f", kHeight - 14) +
         "\" text-anchor=\"middle\">" + escape(options.x_label) + "</text>\n";
  out += "<text x=\"18\" y=\"" + fmt("%.1f", kTop + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
         fmt("%.1f", kTop + ph / 2) + ")\">" + escape(options.y_label) + "</text>\n";

  if (options.marker_x && *options.marker_x >= x0 && *options.marker_x <= x1) {
    const double X = px(*options.marker_x);
    out += "<line x1=\"" + fmt("%.1f", X) + "\" y1=\"" + fmt("%.1f", kTop) + "\" x2=\"" + fmt("%.1f", X) +
           "\" y2=\"" + fmt("%.1f", kTop + ph) + "\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>\n";
    out += "<text x=\"" + fmt("%.1f", X + 4) + "\" y=\"" + fmt("%.1f", kTop + 14) + "\" fill=\"gray\">" +
           escape(options.marker_label) + "</text>\n";
  }

  for (std::size_t j = 0; j < series.size(); ++j) {
    const auto& s = series[j];
    const char* color = kColors[j % (sizeof kColors / sizeof kColors[0])];
    std::string path;
    bool pen_down = false;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!usable(s.y[i])) {
        pen_down = false;
        continue;
      }
      path += (pen_down ? "L" : "M") + fmt("%.2f", px(s.x[i])) + " " + fmt("%.2f", py(s.y[i])) + " ";
      pen_down = true;
    }
    if (!path.empty()) {
      path.pop_back();
      out += "<path d=\"" + path + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.4\"/>\n";
    }
    const double ly = kTop + 12 + 18.0 * static_cast<double>(j);
    out += "<line x1=\"" + fmt("%.1f", kWidth - kRight + 12) + "\" y1=\"" + fmt("%.1f", ly) + "\" x2=\"" +
           fmt("%.1f", kWidth - kRight + 36) + "\" y2=\"" + fmt("%.1f", ly) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + fmt("%.1f", kWidth - kRight + 42) + "\" y=\"" + fmt("%.1f", ly + 4) + "\">" +
           escape(s.name) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace radialwave
