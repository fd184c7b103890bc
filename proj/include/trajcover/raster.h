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

#ifndef TRAJCOVER_RASTER_H_
#define TRAJCOVER_RASTER_H_

#include <cstdint>
#include <vector>

#include "trajcover/geometry.h"
#include "trajcover/scene.h"

namespace trajcover {

struct RasterConfig {
  int height = 400;
  int width = 400;
  double resolution = 0.25;  // meters per pixel
  int agent_row = 320;       // target position, measured from the top-left
  int agent_col = 200;
  double min_saturation = 0.2;  // oldest history frame
};

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(Rgb, Rgb) = default;
};

// Fixed palette. Object hues are drawn at full value with saturation fading
// over the history window.
namespace palette {
inline constexpr Rgb kBackground{0, 0, 0};
inline constexpr Rgb kDrivable{64, 64, 64};
inline constexpr Rgb kLane{255, 255, 255};
inline constexpr double kVehicleHue = 60.0;     // yellow
inline constexpr double kPedestrianHue = 180.0;  // cyan
inline constexpr double kTargetHue = 0.0;        // red
}  // namespace palette

// h in degrees, s and v in [0, 1].
Rgb HsvToRgb(double hue, double saturation, double value);

class RasterImage {
 public:
  RasterImage(int height, int width, double resolution, int agent_row,
              int agent_col);

  int height() const { return height_; }
  int width() const { return width_; }
  double resolution() const { return resolution_; }
  int agent_row() const { return agent_row_; }
  int agent_col() const { return agent_col_; }

  Rgb at(int row, int col) const;
  void set(int row, int col, Rgb color);
  const std::vector<std::uint8_t>& pixels() const { return rgb_; }

  friend bool operator==(const RasterImage&, const RasterImage&) = default;

 private:
  int height_;
  int width_;
  double resolution_;
  int agent_row_;
  int agent_col_;
  std::vector<std::uint8_t> rgb_;  // row-major, 3 bytes per pixel
};

enum class RenderMode { kFull, kMapOnly };

// Agent-frame meters (x forward, y left) to fractional pixel coordinates of
// pixel centres: x is the column, y the row. Forward is up.
Point2 AgentToPixel(Point2 agent, const RasterConfig& config);

// Draws, in order: drivable area, lanes, non-target vehicles, pedestrians,
// target. The image is centred on the target at t_now with its heading up.
// kMapOnly draws the map layers only.
RasterImage Render(const SceneContext& ctx, RenderMode mode,
                   const RasterConfig& config = {});

// Per-cell channel means scaled to [0, 1], row-major over cells with the
// three channels innermost. The grid must divide the image.
std::vector<double> DownsampleFeatures(const RasterImage& image, int rows,
                                       int cols);

}  // namespace trajcover

#endif  // TRAJCOVER_RASTER_H_
