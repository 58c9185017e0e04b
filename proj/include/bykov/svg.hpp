#pragma once

// Minimal standalone SVG plots: polyline curves, reversal ladders (points on
// an index axis), and time-delay profiles (log-scaled ordinate). Element
// ordering is deterministic; numbers use shortest round-trip formatting.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "bykov/core.hpp"
#include "bykov/io.hpp"

namespace bykov {

enum class PlotKind { curve, ladder, profile };

struct PlotPoint {
  double x{0.0};
  double y{0.0};
};

struct PlotSpec {
  PlotKind kind{PlotKind::curve};
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y{false};
  std::vector<std::vector<PlotPoint>> series;
};

namespace detail {

struct Affine {
  double scale{1.0}, offset{0.0};
  double operator()(double v) const { return scale * v + offset; }
};

}  // namespace detail

inline std::string emit_svg(const PlotSpec& spec) {
  bool empty = true;
  for (const auto& s : spec.series)
    if (!s.empty()) empty = false;
  if (spec.series.empty() || empty) throw EmptyDataset();

  constexpr double W = 640, H = 480, ML = 64, MR = 16, MT = 32, MB = 48;
  double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
  auto ty = [&](double y) { return spec.log_y ? std::log10(std::max(y, 1e-300)) : y; };
  for (const auto& s : spec.series)
    for (const auto& p : s) {
      x_min = std::min(x_min, p.x);
      x_max = std::max(x_max, p.x);
      y_min = std::min(y_min, ty(p.y));
      y_max = std::max(y_max, ty(p.y));
    }
  if (x_max <= x_min) { x_min -= 0.5; x_max += 0.5; }
  if (y_max <= y_min) { y_min -= 0.5; y_max += 0.5; }

  detail::Affine X{(W - ML - MR) / (x_max - x_min), 0.0};
  X.offset = ML - X.scale * x_min;
  detail::Affine Y{-(H - MT - MB) / (y_max - y_min), 0.0};
  Y.offset = (H - MB) - Y.scale * y_min;

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<!-- generator: ";
  svg += kToolVersion;
  svg += " -->\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
         "viewBox=\"0 0 640 480\">\n";
  svg += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";

  // axes
  auto line = [&](double x1, double y1, double x2, double y2) {
    svg += "<line x1=\"" + format_double(x1) + "\" y1=\"" + format_double(y1) +
           "\" x2=\"" + format_double(x2) + "\" y2=\"" + format_double(y2) +
           "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  };
  line(ML, H - MB, W - MR, H - MB);
  line(ML, MT, ML, H - MB);

  // tick labels at the axis extremes
  auto text = [&](double x, double y, const std::string& t, const char* anchor) {
    svg += "<text x=\"" + format_double(x) + "\" y=\"" + format_double(y) +
           "\" font-size=\"12\" text-anchor=\"" + anchor + "\">" + t +
           "</text>\n";
  };
  text(ML, H - MB + 16, format_double(x_min), "start");
  text(W - MR, H - MB + 16, format_double(x_max), "end");
  text(ML - 4, H - MB, spec.log_y ? ("1e" + format_double(y_min)) : format_double(y_min), "end");
  text(ML - 4, MT + 8, spec.log_y ? ("1e" + format_double(y_max)) : format_double(y_max), "end");
  text(W / 2, 20, spec.title, "middle");
  text(W / 2, H - 8, spec.x_label, "middle");
  text(16, H / 2, spec.y_label, "middle");

  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b"};
  for (std::size_t si = 0; si < spec.series.size(); ++si) {
    const auto& s = spec.series[si];
    if (s.empty()) continue;
    const char* color = kColors[si % 6];
    if (spec.kind == PlotKind::ladder) {
      for (const auto& p : s)
        svg += "<circle cx=\"" + format_double(X(p.x)) + "\" cy=\"" +
               format_double(Y(ty(p.y))) + "\" r=\"2.5\" fill=\"" + color +
               "\"/>\n";
    } else {
      svg += "<polyline fill=\"none\" stroke=\"";
      svg += color;
      svg += "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) svg += ' ';
        svg += format_double(X(s[i].x)) + "," + format_double(Y(ty(s[i].y)));
      }
      svg += "\"/>\n";
    }
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace bykov
