// Copyright 2026 The TrajCover Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "trajcover/svg.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string_view>

namespace trajcover {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;
constexpr int kTicks = 5;

constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                   "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string Coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string Escape(std::string_view text) {
  std::string out;
  for (char c : text) {
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

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void Add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void Finish() {
    if (lo > hi) {
      lo = 0.0;
      hi = 1.0;
    } else if (lo == hi) {
      const double pad = lo == 0.0 ? 1.0 : 0.05 * std::abs(lo);
      lo -= pad;
      hi += pad;
    }
  }
};

}  // namespace

std::string RenderSvg(const LinePlot& plot) {
  Range xr;
  Range yr;
  for (const Series& s : plot.series) {
    for (double v : s.x) xr.Add(v);
    for (double v : s.y) yr.Add(v);
  }
  if (!plot.x_categories.empty()) {
    xr.Add(0.0);
    xr.Add(static_cast<double>(plot.x_categories.size() - 1));
  }
  xr.Finish();
  yr.Finish();
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) { return kTop + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + Num(kWidth) +
         "\" height=\"" + Num(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + Coord(kLeft + pw / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" +
         Escape(plot.title) + "</text>\n";
  out += "<rect x=\"" + Coord(kLeft) + "\" y=\"" + Coord(kTop) + "\" width=\"" + Coord(pw) +
         "\" height=\"" + Coord(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";

  // Axis ticks.
  for (int i = 0; i <= kTicks; ++i) {
    const double y = yr.lo + (yr.hi - yr.lo) * i / kTicks;
    out += "<line x1=\"" + Coord(kLeft - 4) + "\" y1=\"" + Coord(py(y)) + "\" x2=\"" +
           Coord(kLeft) + "\" y2=\"" + Coord(py(y)) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + Coord(kLeft - 6) + "\" y=\"" + Coord(py(y) + 4) +
           "\" text-anchor=\"end\">" + Num(y) + "</text>\n";
  }
  if (plot.x_categories.empty()) {
    for (int i = 0; i <= kTicks; ++i) {
      const double x = xr.lo + (xr.hi - xr.lo) * i / kTicks;
      out += "<line x1=\"" + Coord(px(x)) + "\" y1=\"" + Coord(kTop + ph) + "\" x2=\"" +
             Coord(px(x)) + "\" y2=\"" + Coord(kTop + ph + 4) + "\" stroke=\"black\"/>\n";
      out += "<text x=\"" + Coord(px(x)) + "\" y=\"" + Coord(kTop + ph + 18) +
             "\" text-anchor=\"middle\">" + Num(x) + "</text>\n";
    }
  } else {
    for (std::size_t i = 0; i < plot.x_categories.size(); ++i) {
      const double x = static_cast<double>(i);
      out += "<text x=\"" + Coord(px(x)) + "\" y=\"" + Coord(kTop + ph + 18) +
             "\" text-anchor=\"middle\">" + Escape(plot.x_categories[i]) + "</text>\n";
    }
  }
  out += "<text x=\"" + Coord(kLeft + pw / 2) + "\" y=\"" + Coord(kHeight - 15) +
         "\" text-anchor=\"middle\">" + Escape(plot.x_label) + "</text>\n";
  out += "<text transform=\"translate(18," + Coord(kTop + ph / 2) +
         ") rotate(-90)\" text-anchor=\"middle\">" + Escape(plot.y_label) + "</text>\n";

  // Series and legend.
  for (std::size_t s = 0; s < plot.series.size(); ++s) {
    const Series& series = plot.series[s];
    const char* color = kColors[s % std::size(kColors)];
    std::string points;
    const std::size_t n = std::min(series.x.size(), series.y.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(series.x[i]) || !std::isfinite(series.y[i])) continue;
      if (!points.empty()) points += ' ';
      points += Coord(px(series.x[i])) + "," + Coord(py(series.y[i]));
      out += "<circle cx=\"" + Coord(px(series.x[i])) + "\" cy=\"" + Coord(py(series.y[i])) +
             "\" r=\"3\" fill=\"" + color + "\"/>\n";
    }
    if (!points.empty()) {
      out += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
             "\" stroke-width=\"2\" points=\"" + points + "\"/>\n";
    }
    const double ly = kTop + 10 + 18 * static_cast<double>(s);
    out += "<line x1=\"" + Coord(kWidth - kRight + 12) + "\" y1=\"" + Coord(ly) + "\" x2=\"" +
           Coord(kWidth - kRight + 32) + "\" y2=\"" + Coord(ly) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + Coord(kWidth - kRight + 36) + "\" y=\"" + Coord(ly + 4) + "\">" +
           Escape(series.name) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace trajcover
