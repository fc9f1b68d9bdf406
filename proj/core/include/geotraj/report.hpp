#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

// Minimal self-contained SVG renderers for the scan outputs. CSV stays the
// authoritative artifact; these are quick-look plots with no external
// plotting dependency.

namespace geotraj {

struct PlotSeries {
  std::string label;
  std::string color;  // CSS color
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 640;
  int height = 420;
  bool log_y = false;
};

std::string render_line_plot(const std::vector<PlotSeries>& series, const PlotOptions& opt);

// Column-major value grid rendered as colored cells; NaN cells are left
// blank. Values are mapped onto a blue-to-red ramp between the finite
// min/max (or the explicit range when lo < hi).
std::string render_heatmap(const std::vector<double>& x_grid,
                           const std::vector<double>& y_grid,
                           const Eigen::MatrixXd& values, const PlotOptions& opt,
                           double lo = 0.0, double hi = 0.0);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace geotraj
