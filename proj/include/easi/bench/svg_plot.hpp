#pragma once

// Convergence-curve plots as standalone SVG: per arm, the median Amari
// index across runs with an interquartile band, on a log-scaled y axis.
// Values are clamped to kPlotFloor before the log; runs that stopped early
// simply drop out of the order statistics beyond their length.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "easi/bench/csv.hpp"
#include "easi/bench/stats.hpp"

namespace easi::bench {

inline constexpr double kPlotFloor = 1e-12;

struct BandPoint {
  std::size_t t = 0;
  double lo = 0;   // first quartile
  double mid = 0;  // median
  double hi = 0;   // third quartile
};

/// Order statistics across runs at sample indices 0, stride, 2*stride, ...
/// up to the longest series. At each index only runs still alive (length
/// > t) contribute; a single run yields a collapsed band equal to itself.
inline std::vector<BandPoint> compute_band(const std::vector<const RunRecord*>& records,
                                           std::size_t stride = 1) {
  if (stride == 0) throw std::invalid_argument("compute_band: stride must be >= 1");
  std::size_t longest = 0;
  for (const RunRecord* r : records) longest = std::max(longest, r->amari.size());
  std::vector<BandPoint> band;
  std::vector<double> alive;
  for (std::size_t t = 0; t < longest; t += stride) {
    alive.clear();
    for (const RunRecord* r : records)
      if (t < r->amari.size()) alive.push_back(r->amari[t]);
    if (alive.empty()) continue;
    std::sort(alive.begin(), alive.end());
    BandPoint point;
    point.t = t;
    point.lo = quantile_sorted(alive, 0.25);
    point.mid = quantile_sorted(alive, 0.5);
    point.hi = quantile_sorted(alive, 0.75);
    band.push_back(point);
  }
  return band;
}

struct AxisRange {
  double lo = 0;
  double hi = 0;
};

/// Decade-snapped log range covering [min_value, max_value], at least one
/// decade wide so a flat series still renders.
inline AxisRange log_axis_range(double min_value, double max_value) {
  min_value = std::max(min_value, kPlotFloor);
  max_value = std::max(max_value, min_value);
  AxisRange range;
  range.lo = std::floor(std::log10(min_value));
  range.hi = std::ceil(std::log10(max_value));
  if (range.hi - range.lo < 1) range.hi = range.lo + 1;
  return range;
}

/// Rounds up to the nearest 1, 2, or 5 times a power of ten.
inline double nice_step(double raw) {
  if (!(raw > 0)) throw std::invalid_argument("nice_step: need a positive raw step");
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double unit = raw / mag;
  if (unit <= 1) return mag;
  if (unit <= 2) return 2 * mag;
  if (unit <= 5) return 5 * mag;
  return 10 * mag;
}

inline std::vector<double> linear_ticks(double lo, double hi, std::size_t target = 6) {
  if (!(hi > lo)) return {lo};
  const double step = nice_step((hi - lo) / static_cast<double>(target));
  std::vector<double> ticks;
  for (double v = std::ceil(lo / step) * step; v <= hi + step * 1e-9; v += step)
    ticks.push_back(v);
  return ticks;
}

namespace detail {

inline std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

inline std::string fmt_px(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace detail

/// A complete SVG document for one arm's band. Pure string assembly, no
/// I/O; emit_plot writes it to disk.
inline std::string render_plot_svg(const std::string& title, const std::vector<BandPoint>& band) {
  if (band.empty()) throw std::invalid_argument("render_plot_svg: empty band");
  constexpr double width = 860, height = 520;
  constexpr double left = 72, right = 24, top = 48, bottom = 56;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  double min_v = band.front().lo, max_v = band.front().hi;
  for (const BandPoint& p : band) {
    min_v = std::min(min_v, p.lo);
    max_v = std::max(max_v, p.hi);
  }
  const AxisRange yr = log_axis_range(min_v, max_v);
  const double x_max = static_cast<double>(band.back().t);

  const auto x_px = [&](double t) {
    return left + (x_max == 0 ? 0.0 : t / x_max * plot_w);
  };
  const auto y_px = [&](double v) {
    const double lv = std::log10(std::max(v, kPlotFloor));
    return top + (1.0 - (lv - yr.lo) / (yr.hi - yr.lo)) * plot_h;
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::fmt_g(width) +
         "\" height=\"" + detail::fmt_g(height) + "\" viewBox=\"0 0 " + detail::fmt_g(width) +
         " " + detail::fmt_g(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  svg += "<text x=\"" + detail::fmt_px(width / 2) +
         "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
         title + "</text>\n";

  // gridlines and y tick labels at decades
  for (double d = yr.lo; d <= yr.hi + 1e-9; d += 1.0) {
    const double y = y_px(std::pow(10.0, d));
    svg += "<line x1=\"" + detail::fmt_px(left) + "\" y1=\"" + detail::fmt_px(y) + "\" x2=\"" +
           detail::fmt_px(width - right) + "\" y2=\"" + detail::fmt_px(y) +
           "\" stroke=\"#dddddd\"/>\n";
    svg += "<text x=\"" + detail::fmt_px(left - 8) + "\" y=\"" + detail::fmt_px(y + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">1e" +
           detail::fmt_g(d) + "</text>\n";
  }
  for (const double t : linear_ticks(0, x_max)) {
    const double x = x_px(t);
    svg += "<line x1=\"" + detail::fmt_px(x) + "\" y1=\"" + detail::fmt_px(height - bottom) +
           "\" x2=\"" + detail::fmt_px(x) + "\" y2=\"" + detail::fmt_px(height - bottom + 5) +
           "\" stroke=\"#333333\"/>\n";
    svg += "<text x=\"" + detail::fmt_px(x) + "\" y=\"" + detail::fmt_px(height - bottom + 18) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
           detail::fmt_g(t) + "</text>\n";
  }

  // interquartile band: upper edge forward, lower edge back
  std::string path = "M";
  for (const BandPoint& p : band)
    path += " " + detail::fmt_px(x_px(static_cast<double>(p.t))) + "," +
            detail::fmt_px(y_px(p.hi));
  path += " L";
  for (std::size_t i = band.size(); i-- > 0;)
    path += " " + detail::fmt_px(x_px(static_cast<double>(band[i].t))) + "," +
            detail::fmt_px(y_px(band[i].lo));
  path += " Z";
  svg += "<path d=\"" + path + "\" fill=\"#4a90d9\" fill-opacity=\"0.25\" stroke=\"none\"/>\n";

  std::string line;
  for (const BandPoint& p : band)
    line += (line.empty() ? "" : " ") + detail::fmt_px(x_px(static_cast<double>(p.t))) + "," +
            detail::fmt_px(y_px(p.mid));
  svg += "<polyline points=\"" + line +
         "\" fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\"/>\n";

  // axes on top of the data
  svg += "<line x1=\"" + detail::fmt_px(left) + "\" y1=\"" + detail::fmt_px(top) + "\" x2=\"" +
         detail::fmt_px(left) + "\" y2=\"" + detail::fmt_px(height - bottom) +
         "\" stroke=\"#333333\"/>\n";
  svg += "<line x1=\"" + detail::fmt_px(left) + "\" y1=\"" + detail::fmt_px(height - bottom) +
         "\" x2=\"" + detail::fmt_px(width - right) + "\" y2=\"" +
         detail::fmt_px(height - bottom) + "\" stroke=\"#333333\"/>\n";
  svg += "<text x=\"" + detail::fmt_px(left + plot_w / 2) + "\" y=\"" +
         detail::fmt_px(height - 12) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">sample</text>\n";
  svg += "<text x=\"16\" y=\"" + detail::fmt_px(top + plot_h / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
         "transform=\"rotate(-90 16 " +
         detail::fmt_px(top + plot_h / 2) + ")\">Amari index</text>\n";
  svg += "</svg>\n";
  return svg;
}

/// One plot_<arm>.svg per arm in dir, arms in first-seen order. The stride
/// is chosen so no plot carries more than ~1000 band points.
inline std::vector<std::string> emit_plot(const std::vector<RunSeries>& runs,
                                          const std::string& dir) {
  if (runs.empty()) throw std::invalid_argument("emit_plot: no runs");
  std::vector<std::string> arm_order;
  std::map<std::string, std::vector<const RunRecord*>> by_arm;
  std::size_t longest = 0;
  for (const RunSeries& run : runs) {
    if (!by_arm.count(run.arm)) arm_order.push_back(run.arm);
    by_arm[run.arm].push_back(&run.record);
    longest = std::max(longest, run.record.amari.size());
  }
  const std::size_t stride = std::max<std::size_t>(1, longest / 1000);
  std::filesystem::create_directories(dir);
  std::vector<std::string> paths;
  for (const std::string& arm : arm_order) {
    const std::vector<BandPoint> band = compute_band(by_arm[arm], stride);
    if (band.empty()) continue;
    const std::string path = dir + "/plot_" + arm + ".svg";
    std::ofstream out = detail::open_for_write(path);
    out << render_plot_svg(arm, band);
    detail::finish_write(out, path);
    paths.push_back(path);
  }
  return paths;
}

}  // namespace easi::bench
