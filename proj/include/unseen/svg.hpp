#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace unseen {

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
};

/// Minimal SVG 1.1 line chart: axes with ticks, one polyline per series and
/// a legend. Non-finite points are skipped.
void write_line_chart(std::ostream& os, const std::vector<PlotSeries>& series, const PlotOptions& opts);

}  // namespace unseen
