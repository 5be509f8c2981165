#include "lgt/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace lgt {

namespace {

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                         "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

struct Axis {
  double lo = 0.0, hi = 1.0;
  bool log = false;

  double map(double v, double pix_lo, double pix_hi) const {
    const double a = log ? std::log10(v) : v;
    const double l = log ? std::log10(lo) : lo;
    const double h = log ? std::log10(hi) : hi;
    const double f = (a - l) / (h - l);
    return pix_lo + f * (pix_hi - pix_lo);
  }

  std::vector<double> ticks() const {
    std::vector<double> out;
    if (log) {
      const int e0 = static_cast<int>(std::floor(std::log10(lo)));
      const int e1 = static_cast<int>(std::ceil(std::log10(hi)));
      for (int e = e0; e <= e1; ++e) {
        const double v = std::pow(10.0, e);
        if (v >= lo * (1 - 1e-12) && v <= hi * (1 + 1e-12)) out.push_back(v);
      }
      if (out.size() < 2) out = {lo, hi};
      return out;
    }
    const double span = hi - lo;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
      if (raw <= m * mag) { step = m * mag; break; }
    }
    const double start = std::ceil(lo / step) * step;
    for (double v = start; v <= hi + 1e-9 * span; v += step) out.push_back(v);
    return out;
  }
};

std::string fmt_tick(double v) {
  std::ostringstream ss;
  const double a = std::abs(v);
  if (v != 0.0 && (a >= 1e4 || a < 1e-3)) {
    ss.precision(0);
    ss << std::scientific << v;
  } else {
    ss.precision(6);
    ss << v;
  }
  return ss.str();
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

}  // namespace

void write_svg_plot(const std::string& path, const std::vector<PlotSeries>& series,
                    const PlotOptions& options) {
  Axis xa, ya;
  xa.log = options.log_x;
  ya.log = options.log_y;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  std::size_t usable = 0;
  for (const PlotSeries& s : series) {
    if (s.x.size() != s.y.size()) throw std::invalid_argument("svg: series size mismatch");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (options.log_x && s.x[i] <= 0) continue;
      if (options.log_y && s.y[i] <= 0) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
      ++usable;
    }
  }
  if (usable < 2) throw std::invalid_argument("svg: nothing to plot");
  if (xmin == xmax) { xmin -= 0.5; xmax += 0.5; }
  if (ymin == ymax) { ymin -= 0.5; ymax += 0.5; }
  if (!options.log_x) {
    const double pad = 0.04 * (xmax - xmin);
    xmin -= pad; xmax += pad;
  }
  if (!options.log_y) {
    const double pad = 0.06 * (ymax - ymin);
    ymin -= pad; ymax += pad;
  }
  xa.lo = xmin; xa.hi = xmax;
  ya.lo = ymin; ya.hi = ymax;

  const double ml = 78, mr = 16, mt = options.title.empty() ? 16 : 36, mb = 52;
  const double px0 = ml, px1 = options.width - mr;
  const double py0 = options.height - mb, py1 = mt;  // y grows upward

  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << options.width
      << "' height='" << options.height << "' viewBox='0 0 " << options.width << " "
      << options.height << "'>\n";
  svg << "<rect width='100%' height='100%' fill='white'/>\n";
  if (!options.title.empty())
    svg << "<text x='" << options.width / 2 << "' y='20' text-anchor='middle' "
        << "font-family='sans-serif' font-size='14'>" << escape(options.title)
        << "</text>\n";

  // Frame and ticks.
  svg << "<rect x='" << px0 << "' y='" << py1 << "' width='" << px1 - px0
      << "' height='" << py0 - py1 << "' fill='none' stroke='black'/>\n";
  for (double v : xa.ticks()) {
    const double px = xa.map(v, px0, px1);
    svg << "<line x1='" << px << "' y1='" << py0 << "' x2='" << px << "' y2='"
        << py0 + 5 << "' stroke='black'/>\n";
    svg << "<text x='" << px << "' y='" << py0 + 18
        << "' text-anchor='middle' font-family='sans-serif' font-size='11'>"
        << fmt_tick(v) << "</text>\n";
  }
  for (double v : ya.ticks()) {
    const double py = ya.map(v, py0, py1);
    svg << "<line x1='" << px0 - 5 << "' y1='" << py << "' x2='" << px0 << "' y2='"
        << py << "' stroke='black'/>\n";
    svg << "<text x='" << px0 - 8 << "' y='" << py + 4
        << "' text-anchor='end' font-family='sans-serif' font-size='11'>"
        << fmt_tick(v) << "</text>\n";
  }
  if (!options.x_label.empty())
    svg << "<text x='" << (px0 + px1) / 2 << "' y='" << options.height - 12
        << "' text-anchor='middle' font-family='sans-serif' font-size='12'>"
        << escape(options.x_label) << "</text>\n";
  if (!options.y_label.empty())
    svg << "<text x='16' y='" << (py0 + py1) / 2
        << "' text-anchor='middle' font-family='sans-serif' font-size='12' "
        << "transform='rotate(-90 16 " << (py0 + py1) / 2 << ")'>"
        << escape(options.y_label) << "</text>\n";

  int color_idx = 0;
  double legend_y = py1 + 14;
  for (const PlotSeries& s : series) {
    const char* color = kColors[color_idx % 8];
    std::ostringstream pts;
    bool pen_down = false;
    std::string polys;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const bool ok = (!options.log_x || s.x[i] > 0) && (!options.log_y || s.y[i] > 0);
      if (!ok) {
        if (pen_down) {
          polys += "<polyline fill='none' stroke='" + std::string(color) +
                   "' stroke-width='1.5' points='" + pts.str() + "'/>\n";
          pts.str("");
          pen_down = false;
        }
        continue;
      }
      pts << xa.map(s.x[i], px0, px1) << "," << ya.map(s.y[i], py0, py1) << " ";
      pen_down = true;
    }
    if (pen_down)
      polys += "<polyline fill='none' stroke='" + std::string(color) +
               "' stroke-width='1.5' points='" + pts.str() + "'/>\n";
    svg << polys;
    if (!s.label.empty()) {
      svg << "<line x1='" << px1 - 120 << "' y1='" << legend_y << "' x2='"
          << px1 - 100 << "' y2='" << legend_y << "' stroke='" << color
          << "' stroke-width='2'/>\n";
      svg << "<text x='" << px1 - 95 << "' y='" << legend_y + 4
          << "' font-family='sans-serif' font-size='11'>" << escape(s.label)
          << "</text>\n";
      legend_y += 15;
    }
    ++color_idx;
  }
  svg << "</svg>\n";

  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write svg: " + path);
  out << svg.str();
}

}  // namespace lgt
