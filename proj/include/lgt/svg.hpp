#pragma once

#include <string>
#include <vector>

namespace lgt {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  int width = 640;
  int height = 440;
};

/// Minimal static line plot writer (axes, ticks, legend, one polyline per
/// series). Log axes drop non-positive samples; an entirely empty plot is an
/// error and no file is written.
void write_svg_plot(const std::string& path, const std::vector<PlotSeries>& series,
                    const PlotOptions& options);

}  // namespace lgt
