#include "hyperem/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace hyperem {

namespace {

constexpr double kWidth = 1000, kHeight = 600;
constexpr double kLeft = 90, kRight = 170, kTop = 50, kBottom = 70;
constexpr int kTicks = 5;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                               "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"};

std::string num(double x, const char* fmt = "%.2f") {
  char buf[40];
  std::snprintf(buf, sizeof buf, fmt, x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const std::vector<PlotSeries>& series, const PlotOptions& options) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (!(xmax >= xmin)) xmin = 0, xmax = 1;
  if (!(ymax >= ymin)) ymin = 0, ymax = 1;
  if (xmax == xmin) xmin -= 0.5, xmax += 0.5;
  if (ymax == ymin) ymin -= 0.5, ymax += 0.5;

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * ph; };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 600\" width=\"1000\" "
         "height=\"600\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"1000\" height=\"600\" fill=\"white\"/>\n";
  out += "<text x=\"500\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"18\">" + escape(options.title) + "</text>\n";
  out += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) +
         "\" height=\"" + num(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int i = 0; i < kTicks; ++i) {
    const double fx = xmin + (xmax - xmin) * i / (kTicks - 1);
    const double fy = ymin + (ymax - ymin) * i / (kTicks - 1);
    const std::string X = num(px(fx)), Y = num(py(fy));
    out += "<line x1=\"" + X + "\" y1=\"" + num(kTop + ph) + "\" x2=\"" + X + "\" y2=\"" +
           num(kTop + ph + 6) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + X + "\" y=\"" + num(kTop + ph + 22) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
           num(fx, "%.4g") + "</text>\n";
    out += "<line x1=\"" + num(kLeft - 6) + "\" y1=\"" + Y + "\" x2=\"" + num(kLeft) +
           "\" y2=\"" + Y + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + num(kLeft - 10) + "\" y=\"" + num(py(fy) + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" +
           num(fy, "%.4g") + "</text>\n";
  }
  if (ymin < 0 && ymax > 0) {
    out += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(py(0)) + "\" x2=\"" + num(kLeft + pw) +
           "\" y2=\"" + num(py(0)) + "\" stroke=\"#999\" stroke-dasharray=\"4 4\"/>\n";
  }
  out += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 20) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" +
         escape(options.x_label) + "</text>\n";
  out += "<text x=\"25\" y=\"" + num(kTop + ph / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
         "transform=\"rotate(-90 25 " + num(kTop + ph / 2) + ")\">" + escape(options.y_label) +
         "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kColors[k % std::size(kColors)];
    out += "<polyline fill=\"none\" stroke=\"";
    out += color;
    out += "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const auto& [x, y] : series[k].points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if (!first) out += ' ';
      out += num(px(x)) + "," + num(py(y));
      first = false;
    }
    out += "\"/>\n";
    const double ly = kTop + 10 + 20.0 * k;
    out += "<line x1=\"" + num(kLeft + pw + 15) + "\" y1=\"" + num(ly) + "\" x2=\"" +
           num(kLeft + pw + 40) + "\" y2=\"" + num(ly) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + num(kLeft + pw + 45) + "\" y=\"" + num(ly + 4) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + escape(series[k].label) +
           "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace hyperem
