#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace gslrec::experiments {

struct PlotSeries {
  std::string label;
  std::vector<double> xs;
  std::vector<double> ys;
};

namespace detail {

inline std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

inline const char* series_color(std::size_t i) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
                                  "#bcbd22", "#e377c2"};
  return palette[i % (sizeof(palette) / sizeof(palette[0]))];
}

}  // namespace detail

/// Writes a fixed-size SVG line chart. Output depends only on the arguments,
/// so identical data produces identical bytes. log_x plots against log10(x)
/// while labeling ticks with the original values.
inline void write_line_plot(const std::string& path, const std::string& title,
                            const std::string& x_label, const std::string& y_label,
                            const std::vector<PlotSeries>& series, bool log_x = false) {
  if (series.empty()) throw std::invalid_argument("write_line_plot: no series");
  for (const PlotSeries& s : series) {
    if (s.xs.size() != s.ys.size())
      throw std::invalid_argument("write_line_plot: series length mismatch");
    if (s.xs.empty()) throw std::invalid_argument("write_line_plot: empty series");
    if (log_x)
      for (double x : s.xs)
        if (!(x > 0.0)) throw std::invalid_argument("write_line_plot: log axis needs x > 0");
  }

  const double width = 800.0, height = 500.0;
  const double left = 80.0, right = 180.0, top = 50.0, bottom = 60.0;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  auto x_of = [&](double v) { return log_x ? std::log10(v) : v; };
  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = x_min, y_max = -x_min;
  for (const PlotSeries& s : series) {
    for (double v : s.xs) {
      x_min = std::min(x_min, x_of(v));
      x_max = std::max(x_max, x_of(v));
    }
    for (double v : s.ys) {
      y_min = std::min(y_min, v);
      y_max = std::max(y_max, v);
    }
  }
  if (x_max == x_min) {
    x_min -= 0.5;
    x_max += 0.5;
  }
  if (y_max == y_min) {
    y_min -= 0.5;
    y_max += 0.5;
  }
  const double y_pad = 0.05 * (y_max - y_min);
  y_min -= y_pad;
  y_max += y_pad;

  auto px = [&](double v) { return left + (x_of(v) - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double v) { return top + plot_h - (v - y_min) / (y_max - y_min) * plot_h; };

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  char buf[256];

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" "
         "viewBox=\"0 0 800 500\">\n"
      << "<rect width=\"800\" height=\"500\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%.1f\" y=\"28\" font-family=\"sans-serif\" font-size=\"18\" "
                "text-anchor=\"middle\">",
                left + plot_w / 2);
  out << buf << title << "</text>\n";

  // frame
  std::snprintf(buf, sizeof(buf),
                "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" "
                "stroke=\"black\"/>\n",
                left, top, plot_w, plot_h);
  out << buf;

  // ticks: 5 per axis at even fractions of the data range
  for (int t = 0; t <= 4; ++t) {
    const double fx = x_min + (x_max - x_min) * t / 4.0;
    const double gx = left + plot_w * t / 4.0;
    const double label_x = log_x ? std::pow(10.0, fx) : fx;
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
                  gx, top + plot_h, gx, top + plot_h + 5);
    out << buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"12\" "
                  "text-anchor=\"middle\">",
                  gx, top + plot_h + 20);
    out << buf << detail::tick_label(label_x) << "</text>\n";

    const double fy = y_min + (y_max - y_min) * t / 4.0;
    const double gy = top + plot_h - plot_h * t / 4.0;
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
                  left - 5, gy, left, gy);
    out << buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"12\" "
                  "text-anchor=\"end\">",
                  left - 10, gy + 4);
    out << buf << detail::tick_label(fy) << "</text>\n";
  }

  // axis labels
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"14\" "
                "text-anchor=\"middle\">",
                left + plot_w / 2, height - 15.0);
  out << buf << x_label << "</text>\n";
  std::snprintf(buf, sizeof(buf),
                "<text x=\"20\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"14\" "
                "text-anchor=\"middle\" transform=\"rotate(-90 20 %.1f)\">",
                top + plot_h / 2, top + plot_h / 2);
  out << buf << y_label << "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    out << "<polyline fill=\"none\" stroke=\"" << detail::series_color(i)
        << "\" stroke-width=\"2\" points=\"";
    for (std::size_t k = 0; k < series[i].xs.size(); ++k) {
      std::snprintf(buf, sizeof(buf), "%s%.2f,%.2f", k ? " " : "", px(series[i].xs[k]),
                    py(series[i].ys[k]));
      out << buf;
    }
    out << "\"/>\n";
    // legend entry
    const double ly = top + 16.0 + 18.0 * static_cast<double>(i);
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"%s\" "
                  "stroke-width=\"2\"/>\n",
                  width - right + 10, ly, width - right + 34, ly, detail::series_color(i));
    out << buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"12\">",
                  width - right + 40, ly + 4);
    out << buf << series[i].label << "</text>\n";
  }
  out << "</svg>\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace gslrec::experiments
