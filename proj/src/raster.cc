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

#include "trajcover/raster.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "trajcover/contract.h"

namespace trajcover {
namespace {

using PixelRing = std::vector<Point2>;  // (x = col, y = row)

// Even-odd scanline fill over all rings at once, sampling pixel centres.
// Pixel (r, c) is filled when its centre lies in [left, right) of a span.
void FillRings(RasterImage& image, const std::vector<PixelRing>& rings,
               Rgb color) {
  double min_row = 1e300, max_row = -1e300;
  for (const PixelRing& ring : rings) {
    for (const Point2& p : ring) {
      min_row = std::min(min_row, p.y);
      max_row = std::max(max_row, p.y);
    }
  }
  const int r0 = std::max(0, static_cast<int>(std::ceil(min_row)));
  const int r1 = std::min(image.height() - 1, static_cast<int>(std::floor(max_row)));
  std::vector<double> crossings;
  for (int r = r0; r <= r1; ++r) {
    const double yc = r;
    crossings.clear();
    for (const PixelRing& ring : rings) {
      const std::size_t n = ring.size();
      for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point2 a = ring[j];
        const Point2 b = ring[i];
        if ((a.y > yc) != (b.y > yc)) {
          crossings.push_back(a.x + (yc - a.y) * (b.x - a.x) / (b.y - a.y));
        }
      }
    }
    std::sort(crossings.begin(), crossings.end());
    for (std::size_t k = 0; k + 1 < crossings.size(); k += 2) {
      const double left = std::max(crossings[k], -1.0);
      const double right = std::min(crossings[k + 1],
                                    static_cast<double>(image.width()));
      const int c0 = std::max(0, static_cast<int>(std::ceil(left)));
      const int c1 = std::min(image.width() - 1,
                              static_cast<int>(std::ceil(right)) - 1);
      for (int c = c0; c <= c1; ++c) image.set(r, c, color);
    }
  }
}

void DrawPolyline(RasterImage& image, const std::vector<Point2>& pixels,
                  Rgb color) {
  auto plot = [&](Point2 p) {
    const int r = static_cast<int>(std::lround(p.y));
    const int c = static_cast<int>(std::lround(p.x));
    if (r >= 0 && r < image.height() && c >= 0 && c < image.width()) {
      image.set(r, c, color);
    }
  };
  if (pixels.size() == 1) plot(pixels[0]);
  for (std::size_t i = 1; i < pixels.size(); ++i) {
    const Point2 a = pixels[i - 1];
    const Point2 b = pixels[i];
    const int steps = std::max(1, static_cast<int>(std::ceil(2.0 * Norm(b - a))));
    for (int k = 0; k <= steps; ++k) {
      plot(a + (static_cast<double>(k) / steps) * (b - a));
    }
  }
}

struct Extent {
  double length;
  double width;
};

Extent BoxExtent(const Agent& agent, const AgentState& s) {
  if (s.length > 0.0 && s.width > 0.0) return {s.length, s.width};
  if (agent.type == AgentType::kPedestrian) {
    return {kImputedPedestrianSize, kImputedPedestrianSize};
  }
  return {kImputedVehicleLength, kImputedVehicleWidth};
}

class Painter {
 public:
  Painter(const RasterConfig& config, const Pose2& origin)
      : config_(config), origin_(origin) {}

  Point2 ToPixel(Point2 global) const {
    return AgentToPixel(ToAgentFrame(global, origin_), config_);
  }

  PixelRing ToPixels(const std::vector<Point2>& global) const {
    PixelRing out;
    out.reserve(global.size());
    for (const Point2& p : global) out.push_back(ToPixel(p));
    return out;
  }

  void DrawAgent(RasterImage& image, const Agent& agent, double hue,
                 double t_now, double window) const {
    for (const AgentState& s : agent.states) {
      const double age = t_now - s.t;
      if (age < -1e-9 || age > window + 1e-9) continue;
      const double fresh = window > 0.0 ? 1.0 - age / window : 1.0;
      const double saturation =
          config_.min_saturation + (1.0 - config_.min_saturation) * fresh;
      const Extent e = BoxExtent(agent, s);
      const double c = std::cos(s.pose.yaw);
      const double sn = std::sin(s.pose.yaw);
      const Point2 fwd{0.5 * e.length * c, 0.5 * e.length * sn};
      const Point2 left{-0.5 * e.width * sn, 0.5 * e.width * c};
      const Point2 center = s.pose.position();
      const std::vector<Point2> corners = {
          center + fwd + left, center - fwd + left, center - fwd - left,
          center + fwd - left};
      FillRings(image, {ToPixels(corners)}, HsvToRgb(hue, saturation, 1.0));
    }
  }

 private:
  const RasterConfig& config_;
  Pose2 origin_;
};

}  // namespace

Rgb HsvToRgb(double hue, double saturation, double value) {
  const double h = std::fmod(std::fmod(hue, 360.0) + 360.0, 360.0) / 60.0;
  const double c = value * saturation;
  const double x = c * (1.0 - std::abs(std::fmod(h, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(h)) {
    case 0: r = c; g = x; break;
    case 1: r = x; g = c; break;
    case 2: g = c; b = x; break;
    case 3: g = x; b = c; break;
    case 4: r = x; b = c; break;
    default: r = c; b = x; break;
  }
  const double m = value - c;
  auto to8 = [](double v) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
  };
  return {to8(r + m), to8(g + m), to8(b + m)};
}

RasterImage::RasterImage(int height, int width, double resolution,
                         int agent_row, int agent_col)
    : height_(height),
      width_(width),
      resolution_(resolution),
      agent_row_(agent_row),
      agent_col_(agent_col),
      rgb_(static_cast<std::size_t>(height) * width * 3, 0) {
  Require(height > 0 && width > 0 && resolution > 0.0,
          "raster dimensions must be positive");
}

Rgb RasterImage::at(int row, int col) const {
  const std::size_t i = (static_cast<std::size_t>(row) * width_ + col) * 3;
  return {rgb_[i], rgb_[i + 1], rgb_[i + 2]};
}

void RasterImage::set(int row, int col, Rgb color) {
  const std::size_t i = (static_cast<std::size_t>(row) * width_ + col) * 3;
  rgb_[i] = color.r;
  rgb_[i + 1] = color.g;
  rgb_[i + 2] = color.b;
}

Point2 AgentToPixel(Point2 agent, const RasterConfig& config) {
  return {config.agent_col - agent.y / config.resolution,
          config.agent_row - agent.x / config.resolution};
}

RasterImage Render(const SceneContext& ctx, RenderMode mode,
                   const RasterConfig& config) {
  const Pose2 origin = ctx.TargetState().pose;
  RasterImage image(config.height, config.width, config.resolution,
                    config.agent_row, config.agent_col);
  const Painter painter(config, origin);

  for (const Polygon& polygon : ctx.map.drivable.polygons) {
    std::vector<PixelRing> rings{painter.ToPixels(polygon.outer)};
    for (const Ring& hole : polygon.holes) rings.push_back(painter.ToPixels(hole));
    FillRings(image, rings, palette::kDrivable);
  }
  for (const Polyline& lane : ctx.map.lanes) {
    DrawPolyline(image, painter.ToPixels(lane), palette::kLane);
  }
  if (mode == RenderMode::kMapOnly) return image;

  const Agent& target = ctx.Target();
  for (const Agent& a : ctx.agents) {
    if (&a != &target && a.type == AgentType::kVehicle) {
      painter.DrawAgent(image, a, palette::kVehicleHue, ctx.t_now,
                        ctx.history_window);
    }
  }
  for (const Agent& a : ctx.agents) {
    if (&a != &target && a.type == AgentType::kPedestrian) {
      painter.DrawAgent(image, a, palette::kPedestrianHue, ctx.t_now,
                        ctx.history_window);
    }
  }
  painter.DrawAgent(image, target, palette::kTargetHue, ctx.t_now,
                    ctx.history_window);
  return image;
}

std::vector<double> DownsampleFeatures(const RasterImage& image, int rows,
                                       int cols) {
  Require(rows > 0 && cols > 0 && image.height() % rows == 0 &&
              image.width() % cols == 0,
          "feature grid must divide the image dimensions");
  const int cell_h = image.height() / rows;
  const int cell_w = image.width() / cols;
  std::vector<double> sums(static_cast<std::size_t>(rows) * cols * 3, 0.0);
  const auto& px = image.pixels();
  for (int r = 0; r < image.height(); ++r) {
    const std::size_t cell_row = static_cast<std::size_t>(r / cell_h) * cols;
    for (int c = 0; c < image.width(); ++c) {
      const std::size_t cell = (cell_row + c / cell_w) * 3;
      const std::size_t p = (static_cast<std::size_t>(r) * image.width() + c) * 3;
      sums[cell] += px[p];
      sums[cell + 1] += px[p + 1];
      sums[cell + 2] += px[p + 2];
    }
  }
  const double scale = 1.0 / (255.0 * cell_h * cell_w);
  for (double& v : sums) v *= scale;
  return sums;
}

}  // namespace trajcover
