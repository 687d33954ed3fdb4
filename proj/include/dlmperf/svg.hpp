#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "dlmperf/report.hpp"
#include "dlmperf/roofline.hpp"
#include "dlmperf/sweep.hpp"

// Static SVG plots. Layout is fixed (canvas size, margins, legend in the top
// left corner) so the output only depends on the data.

namespace dlmperf::svg {

inline constexpr double kWidth = 800;
inline constexpr double kHeight = 560;
inline constexpr double kLeft = 90;
inline constexpr double kRight = 30;
inline constexpr double kTop = 40;
inline constexpr double kBottom = 70;

inline const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                       "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string escape(const std::string& s) {
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

/// Logarithmic mapping of [lo, hi] onto the pixel range [p0, p1].
struct LogAxis {
  double lo = 1, hi = 10;
  double p0 = 0, p1 = 1;
  double base = 10;

  double operator()(double v) const {
    const double t = (std::log(v) - std::log(lo)) / (std::log(hi) - std::log(lo));
    return p0 + t * (p1 - p0);
  }

  // Powers of `base` inside [lo, hi].
  std::vector<double> ticks() const {
    std::vector<double> out;
    const double first = std::ceil(std::log(lo) / std::log(base) - 1e-9);
    const double last = std::floor(std::log(hi) / std::log(base) + 1e-9);
    for (double e = first; e <= last; e += 1) out.push_back(std::pow(base, e));
    return out;
  }
};

/// Decade-aligned range covering [lo, hi].
inline std::pair<double, double> decade_range(double lo, double hi) {
  return {std::pow(10.0, std::floor(std::log10(lo))), std::pow(10.0, std::ceil(std::log10(hi)))};
}

/// Power-of-two-aligned range covering [lo, hi].
inline std::pair<double, double> pow2_range(double lo, double hi) {
  double a = std::pow(2.0, std::floor(std::log2(lo)));
  double b = std::pow(2.0, std::ceil(std::log2(hi)));
  if (a == b) b = a * 2;
  return {a, b};
}

inline std::string tick_label(double v, double base) {
  if (base == 2) {
    char buf[32];
    if (v >= 1024 && std::fmod(v, 1024) == 0) {
      std::snprintf(buf, sizeof buf, "%gk", v / 1024);
    } else {
      std::snprintf(buf, sizeof buf, "%g", v);
    }
    return buf;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "1e%d", static_cast<int>(std::lround(std::log10(v))));
  return buf;
}

class Document {
 public:
  explicit Document(std::string title) {
    body_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
          << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
          << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
          << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
          << "<text x=\"" << num(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" "
          << "font-size=\"15\">" << escape(title) << "</text>\n";
  }

  void axes(const LogAxis& x, const LogAxis& y, const std::string& xlabel,
            const std::string& ylabel) {
    const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
    body_ << "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n"
          << "<rect x=\"" << num(x0) << "\" y=\"" << num(y1) << "\" width=\"" << num(x1 - x0)
          << "\" height=\"" << num(y0 - y1) << "\"/>\n</g>\n";
    for (double t : x.ticks()) {
      const double px = x(t);
      body_ << "<line class=\"grid\" x1=\"" << num(px) << "\" y1=\"" << num(y1) << "\" x2=\""
            << num(px) << "\" y2=\"" << num(y0) << "\" stroke=\"#dddddd\"/>\n"
            << "<text x=\"" << num(px) << "\" y=\"" << num(y0 + 18)
            << "\" text-anchor=\"middle\">" << tick_label(t, x.base) << "</text>\n";
    }
    for (double t : y.ticks()) {
      const double py = y(t);
      body_ << "<line class=\"grid\" x1=\"" << num(x0) << "\" y1=\"" << num(py) << "\" x2=\""
            << num(x1) << "\" y2=\"" << num(py) << "\" stroke=\"#dddddd\"/>\n"
            << "<text x=\"" << num(x0 - 8) << "\" y=\"" << num(py + 4)
            << "\" text-anchor=\"end\">" << tick_label(t, y.base) << "</text>\n";
    }
    body_ << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(kHeight - 25)
          << "\" text-anchor=\"middle\">" << escape(xlabel) << "</text>\n"
          << "<text x=\"20\" y=\"" << num((y0 + y1) / 2)
          << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " << num((y0 + y1) / 2)
          << ")\">" << escape(ylabel) << "</text>\n";
  }

  std::ostringstream& raw() { return body_; }

  std::string str() const { return body_.str() + "</svg>\n"; }

  void write(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << str();
    if (!out.flush()) throw IoError("write to '" + path.string() + "' failed");
  }

 private:
  std::ostringstream body_;
};

/// Axes of a roofline chart for `points` on `hw`; exposed so callers can
/// locate features of the rendered plot.
struct RooflineAxes {
  LogAxis x, y;
};

inline RooflineAxes roofline_axes(const std::vector<RooflinePoint>& points,
                                  const HardwareSpec& hw) {
  const double ridge = ridge_point(hw);
  double ai_lo = ridge, ai_hi = ridge, perf_lo = hw.peak_flops;
  for (const auto& p : points) {
    if (p.ai > 0) {
      ai_lo = std::min(ai_lo, p.ai);
      ai_hi = std::max(ai_hi, p.ai);
    }
    if (p.perf_attained > 0) perf_lo = std::min(perf_lo, p.perf_attained);
  }
  perf_lo = std::min(perf_lo, ai_lo * hw.mem_bandwidth);
  const auto [xl, xh] = decade_range(ai_lo / 2, ai_hi * 2);
  const auto [yl, yh] = decade_range(perf_lo / 2, hw.peak_flops * 2);
  return {{xl, xh, kLeft, kWidth - kRight, 10}, {yl, yh, kHeight - kBottom, kTop, 10}};
}

/// Roofline chart: bandwidth roof (slope 1) up to the ridge, flat compute
/// roof after it, a marked ridge line, and one labelled marker per point.
inline std::string roofline_svg(const std::vector<RooflinePoint>& points,
                                const HardwareSpec& hw) {
  if (points.empty()) throw ValidationError("roofline plot needs at least one point");
  const double ridge = ridge_point(hw);
  const auto ax = roofline_axes(points, hw);
  Document doc("Roofline: " + hw.name);
  doc.axes(ax.x, ax.y, "Arithmetic intensity (FLOP/byte)", "Performance (FLOP/s)");
  auto& o = doc.raw();
  const double xhi = ax.x.hi;
  const double roof_start = std::max(ax.x.lo, ax.y.lo / hw.mem_bandwidth);
  o << "<polyline class=\"roof-bandwidth\" fill=\"none\" stroke=\"black\" stroke-width=\"2\" "
    << "points=\"" << num(ax.x(roof_start)) << ',' << num(ax.y(roof_start * hw.mem_bandwidth))
    << ' '
    << num(ax.x(ridge)) << ',' << num(ax.y(hw.peak_flops)) << "\"/>\n";
  o << "<polyline class=\"roof-compute\" fill=\"none\" stroke=\"black\" stroke-width=\"2\" "
    << "points=\"" << num(ax.x(ridge)) << ',' << num(ax.y(hw.peak_flops)) << ' '
    << num(ax.x(xhi)) << ',' << num(ax.y(hw.peak_flops)) << "\"/>\n";
  char ridge_txt[64];
  std::snprintf(ridge_txt, sizeof ridge_txt, "ridge %.1f FLOP/B", ridge);
  o << "<line class=\"ridge\" data-ai=\"" << format_g6(ridge) << "\" x1=\"" << num(ax.x(ridge))
    << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(ax.x(ridge)) << "\" y2=\""
    << num(kHeight - kBottom) << "\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>\n"
    << "<text x=\"" << num(ax.x(ridge) + 4) << "\" y=\"" << num(kHeight - kBottom - 6)
    << "\" fill=\"gray\">" << ridge_txt << "</text>\n";

  std::map<std::string, std::size_t> colors;
  for (const auto& p : points) {
    const auto key = p.label.substr(0, p.label.find(' '));
    colors.emplace(key, colors.size());
  }
  for (const auto& p : points) {
    if (!(p.ai > 0) || !(p.perf_attained > 0)) continue;
    const auto key = p.label.substr(0, p.label.find(' '));
    const char* c = kPalette[colors[key] % std::size(kPalette)];
    o << "<circle class=\"point\" data-ai=\"" << format_g6(p.ai) << "\" cx=\"" << num(ax.x(p.ai))
      << "\" cy=\"" << num(ax.y(p.perf_attained)) << "\" r=\"4\" fill=\"" << c << "\"/>\n"
      << "<text x=\"" << num(ax.x(p.ai) + 6) << "\" y=\"" << num(ax.y(p.perf_attained) - 6)
      << "\" font-size=\"9\" fill=\"" << c << "\">" << escape(p.label) << "</text>\n";
  }
  return doc.str();
}

inline void emit_roofline_svg(const std::vector<RooflinePoint>& points, const HardwareSpec& hw,
                              const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << roofline_svg(points, hw);
  if (!out.flush()) throw IoError("write to '" + path.string() + "' failed");
}

enum class PlotKind { latency, throughput, ai };

inline PlotKind parse_plot_kind(const std::string& s) {
  if (s == "latency") return PlotKind::latency;
  if (s == "throughput") return PlotKind::throughput;
  if (s == "ai") return PlotKind::ai;
  throw ValidationError("plot kind must be latency, throughput or ai");
}

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<bool> oom;
};

/// Metric of `kind` against the grid's first axis, one series per
/// combination of the remaining axes. Points that do not fit in memory are
/// drawn as crosses labelled OOM.
inline std::string line_plot_svg(const SweepGrid& g, const std::vector<SweepRow>& rows,
                                 PlotKind kind) {
  if (g.axes.empty()) throw ValidationError("plot needs a grid with at least one axis");
  if (rows.empty()) throw ValidationError("plot needs at least one row");
  const auto& xaxis = g.axes.front();
  const std::size_t inner = rows.size() / xaxis.values.size();

  std::vector<Series> series(inner);
  for (std::size_t s = 0; s < inner; ++s) {
    std::string name = std::string(to_string(g.base.mode));
    std::size_t stride = inner;
    for (std::size_t a = 1; a < g.axes.size(); ++a) {
      stride /= g.axes[a].values.size();
      const auto v = g.axes[a].values[(s / stride) % g.axes[a].values.size()];
      name += " " + g.axes[a].field + "=" + std::to_string(v);
    }
    series[s].name = name;
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    auto& s = series[i % inner];
    s.x.push_back(static_cast<double>(xaxis.values[i / inner]));
    const double y = kind == PlotKind::latency      ? r.latency_s
                     : kind == PlotKind::throughput ? r.throughput_tok_s
                                                    : r.ai;
    s.y.push_back(y);
    s.oom.push_back(!r.fits);
  }

  double xlo = 1e300, xhi = 0, ylo = 1e300, yhi = 0;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (s.x[i] > 0) {
        xlo = std::min(xlo, s.x[i]);
        xhi = std::max(xhi, s.x[i]);
      }
      if (s.y[i] > 0) {
        ylo = std::min(ylo, s.y[i]);
        yhi = std::max(yhi, s.y[i]);
      }
    }
  }
  if (xhi == 0 || yhi == 0) throw ValidationError("plot has no positive values");
  const auto [xl, xh] = pow2_range(xlo, xhi);
  const auto [yl, yh] = decade_range(ylo, yhi * 1.0000001);
  const LogAxis x{xl, xh, kLeft, kWidth - kRight, 2};
  const LogAxis y{yl, yh == yl ? yl * 10 : yh, kHeight - kBottom, kTop, 10};

  const char* ylabel = kind == PlotKind::latency      ? "Latency (s)"
                       : kind == PlotKind::throughput ? "Throughput (tokens/s)"
                                                      : "Arithmetic intensity (FLOP/byte)";
  const char* title = kind == PlotKind::latency      ? "Latency"
                      : kind == PlotKind::throughput ? "Throughput"
                                                     : "Arithmetic intensity";
  Document doc(std::string(title) + " vs " + xaxis.field + " (" + g.model.name + ", " +
               g.hardware.name + ")");
  doc.axes(x, y, xaxis.field, ylabel);
  auto& o = doc.raw();
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* c = kPalette[si % std::size(kPalette)];
    o << "<polyline class=\"series\" fill=\"none\" stroke=\"" << c
      << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (s.oom[i] || !(s.y[i] > 0)) continue;
      o << (first ? "" : " ") << num(x(s.x[i])) << ',' << num(y(s.y[i]));
      first = false;
    }
    o << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.y[i] > 0)) continue;
      const double px = x(s.x[i]), py = y(s.y[i]);
      if (s.oom[i]) {
        o << "<path class=\"oom\" d=\"M" << num(px - 4) << ' ' << num(py - 4) << " L"
          << num(px + 4) << ' ' << num(py + 4) << " M" << num(px - 4) << ' ' << num(py + 4)
          << " L" << num(px + 4) << ' ' << num(py - 4) << "\" stroke=\"" << c << "\"/>\n"
          << "<text x=\"" << num(px + 5) << "\" y=\"" << num(py - 5)
          << "\" font-size=\"9\" fill=\"" << c << "\">OOM</text>\n";
      } else {
        o << "<circle class=\"point\" cx=\"" << num(px) << "\" cy=\"" << num(py)
          << "\" r=\"3\" fill=\"" << c << "\"/>\n";
      }
    }
    const double ly = kTop + 16 + 16 * static_cast<double>(si);
    o << "<rect x=\"" << num(kLeft + 10) << "\" y=\"" << num(ly - 9) << "\" width=\"10\" "
      << "height=\"10\" fill=\"" << c << "\"/>\n"
      << "<text class=\"legend\" x=\"" << num(kLeft + 26) << "\" y=\"" << num(ly) << "\">"
      << escape(s.name) << "</text>\n";
  }
  return doc.str();
}

}  // namespace dlmperf::svg
