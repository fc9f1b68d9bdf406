#include "geotraj/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace geotraj {

namespace {

constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 50;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void finite_range(const std::vector<double>& v, double& lo, double& hi) {
  for (double x : v) {
    if (!std::isfinite(x)) continue;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
}

std::string svg_header(const PlotOptions& opt) {
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                  std::to_string(opt.width) + "\" height=\"" +
                  std::to_string(opt.height) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opt.title.empty())
    s += "<text x=\"" + std::to_string(opt.width / 2) +
         "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" + opt.title +
         "</text>\n";
  return s;
}

std::string axis_labels(const PlotOptions& opt) {
  std::string s;
  if (!opt.x_label.empty())
    s += "<text x=\"" + std::to_string(opt.width / 2) + "\" y=\"" +
         std::to_string(opt.height - 10) +
         "\" text-anchor=\"middle\" font-size=\"12\">" + opt.x_label + "</text>\n";
  if (!opt.y_label.empty())
    s += "<text x=\"16\" y=\"" + std::to_string(opt.height / 2) +
         "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 " +
         std::to_string(opt.height / 2) + ")\">" + opt.y_label + "</text>\n";
  return s;
}

}  // namespace

std::string render_line_plot(const std::vector<PlotSeries>& series,
                             const PlotOptions& opt) {
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const auto& s : series) {
    finite_range(s.x, x_lo, x_hi);
    if (opt.log_y) {
      for (double y : s.y)
        if (std::isfinite(y) && y > 0.0) {
          y_lo = std::min(y_lo, y);
          y_hi = std::max(y_hi, y);
        }
    } else {
      finite_range(s.y, y_lo, y_hi);
    }
  }
  if (!(x_hi > x_lo)) x_hi = x_lo + 1.0;
  if (!(y_hi > y_lo)) {
    if (!std::isfinite(y_lo)) y_lo = 0.0;
    y_hi = y_lo + 1.0;
  }
  auto ty = [&](double y) {
    double f;
    if (opt.log_y)
      f = (std::log10(std::max(y, y_lo)) - std::log10(y_lo)) /
          (std::log10(y_hi) - std::log10(y_lo));
    else
      f = (y - y_lo) / (y_hi - y_lo);
    return kMarginTop + (1.0 - f) * (opt.height - kMarginTop - kMarginBottom);
  };
  auto tx = [&](double x) {
    return kMarginLeft +
           (x - x_lo) / (x_hi - x_lo) * (opt.width - kMarginLeft - kMarginRight);
  };

  std::string out = svg_header(opt);
  out += "<rect x=\"" + std::to_string(kMarginLeft) + "\" y=\"" +
         std::to_string(kMarginTop) + "\" width=\"" +
         std::to_string(opt.width - kMarginLeft - kMarginRight) + "\" height=\"" +
         std::to_string(opt.height - kMarginTop - kMarginBottom) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  out += "<text x=\"" + std::to_string(kMarginLeft) + "\" y=\"" +
         std::to_string(opt.height - kMarginBottom + 16) +
         "\" font-size=\"11\">" + fmt(x_lo) + "</text>\n";
  out += "<text x=\"" + std::to_string(opt.width - kMarginRight) + "\" y=\"" +
         std::to_string(opt.height - kMarginBottom + 16) +
         "\" text-anchor=\"end\" font-size=\"11\">" + fmt(x_hi) + "</text>\n";
  out += "<text x=\"" + std::to_string(kMarginLeft - 4) + "\" y=\"" +
         std::to_string(kMarginTop + 10) +
         "\" text-anchor=\"end\" font-size=\"11\">" + fmt(y_hi) + "</text>\n";
  out += "<text x=\"" + std::to_string(kMarginLeft - 4) + "\" y=\"" +
         std::to_string(opt.height - kMarginBottom) +
         "\" text-anchor=\"end\" font-size=\"11\">" + fmt(y_lo) + "</text>\n";

  int legend_row = 0;
  for (const auto& s : series) {
    std::string pts;
    bool pen_down = false;
    for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      const double y = s.y[i];
      if (!std::isfinite(y) || (opt.log_y && y <= 0.0)) {
        pen_down = false;
        continue;
      }
      pts += (pen_down ? " L" : (pts.empty() ? "M" : " M"));
      pts += fmt(tx(s.x[i])) + " " + fmt(ty(y));
      pen_down = true;
    }
    if (!pts.empty())
      out += "<path d=\"" + pts + "\" fill=\"none\" stroke=\"" +
             (s.color.empty() ? "black" : s.color) + "\" stroke-width=\"1.5\"/>\n";
    if (!s.label.empty()) {
      const int y = kMarginTop + 16 + 16 * legend_row++;
      out += "<line x1=\"" + std::to_string(kMarginLeft + 8) + "\" y1=\"" +
             std::to_string(y - 4) + "\" x2=\"" + std::to_string(kMarginLeft + 28) +
             "\" y2=\"" + std::to_string(y - 4) + "\" stroke=\"" +
             (s.color.empty() ? "black" : s.color) + "\" stroke-width=\"1.5\"/>\n";
      out += "<text x=\"" + std::to_string(kMarginLeft + 34) + "\" y=\"" +
             std::to_string(y) + "\" font-size=\"11\">" + s.label + "</text>\n";
    }
  }
  out += axis_labels(opt);
  out += "</svg>\n";
  return out;
}

std::string render_heatmap(const std::vector<double>& x_grid,
                           const std::vector<double>& y_grid,
                           const Eigen::MatrixXd& values, const PlotOptions& opt,
                           double lo, double hi) {
  if (static_cast<Eigen::Index>(x_grid.size()) != values.rows() ||
      static_cast<Eigen::Index>(y_grid.size()) != values.cols())
    throw std::invalid_argument("render_heatmap: grid/value shape mismatch");
  if (!(lo < hi)) {
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    for (Eigen::Index i = 0; i < values.rows(); ++i)
      for (Eigen::Index j = 0; j < values.cols(); ++j)
        if (std::isfinite(values(i, j))) {
          lo = std::min(lo, values(i, j));
          hi = std::max(hi, values(i, j));
        }
    if (!(hi > lo)) {
      if (!std::isfinite(lo)) lo = 0.0;
      hi = lo + 1.0;
    }
  }
  const double plot_w = opt.width - kMarginLeft - kMarginRight;
  const double plot_h = opt.height - kMarginTop - kMarginBottom;
  const double cw = plot_w / static_cast<double>(x_grid.size());
  const double ch = plot_h / static_cast<double>(y_grid.size());

  std::string out = svg_header(opt);
  char buf[200];
  for (size_t i = 0; i < x_grid.size(); ++i) {
    for (size_t j = 0; j < y_grid.size(); ++j) {
      const double v = values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (!std::isfinite(v)) continue;
      const double f = std::clamp((v - lo) / (hi - lo), 0.0, 1.0);
      const int r = static_cast<int>(255.0 * f);
      const int b = static_cast<int>(255.0 * (1.0 - f));
      const int g = static_cast<int>(80.0 + 100.0 * (1.0 - std::abs(2.0 * f - 1.0)));
      const double x = kMarginLeft + cw * static_cast<double>(i);
      const double y = kMarginTop + plot_h - ch * static_cast<double>(j + 1);
      std::snprintf(buf, sizeof buf,
                    "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" "
                    "fill=\"rgb(%d,%d,%d)\"/>\n",
                    x, y, cw + 0.5, ch + 0.5, r, g, b);
      out += buf;
    }
  }
  out += "<rect x=\"" + std::to_string(kMarginLeft) + "\" y=\"" +
         std::to_string(kMarginTop) + "\" width=\"" + fmt(plot_w) + "\" height=\"" +
         fmt(plot_h) + "\" fill=\"none\" stroke=\"black\"/>\n";
  out += "<text x=\"" + std::to_string(kMarginLeft) + "\" y=\"" +
         std::to_string(opt.height - kMarginBottom + 16) + "\" font-size=\"11\">" +
         fmt(x_grid.front()) + "</text>\n";
  out += "<text x=\"" + std::to_string(opt.width - kMarginRight) + "\" y=\"" +
         std::to_string(opt.height - kMarginBottom + 16) +
         "\" text-anchor=\"end\" font-size=\"11\">" + fmt(x_grid.back()) + "</text>\n";
  out += "<text x=\"" + std::to_string(kMarginLeft - 4) + "\" y=\"" +
         std::to_string(opt.height - kMarginBottom) +
         "\" text-anchor=\"end\" font-size=\"11\">" + fmt(y_grid.front()) + "</text>\n";
  out += "<text x=\"" + std::to_string(kMarginLeft - 4) + "\" y=\"" +
         std::to_string(kMarginTop + 10) + "\" text-anchor=\"end\" font-size=\"11\">" +
         fmt(y_grid.back()) + "</text>\n";
  out += axis_labels(opt);
  out += "</svg>\n";
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace geotraj
