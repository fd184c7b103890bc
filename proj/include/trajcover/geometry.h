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

#ifndef TRAJCOVER_GEOMETRY_H_
#define TRAJCOVER_GEOMETRY_H_

#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace trajcover {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
  friend bool operator==(Point2 a, Point2 b) = default;
};

// Kernels read point arrays as interleaved doubles.
static_assert(sizeof(Point2) == 2 * sizeof(double));

inline double Norm(Point2 p) { return std::hypot(p.x, p.y); }

// Wraps an angle into (-pi, pi].
double NormalizeAngle(double radians);

struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;  // radians, CCW from +x, normalized to (-pi, pi]

  static Pose2 Make(double x, double y, double yaw) {
    return {x, y, NormalizeAngle(yaw)};
  }
  Point2 position() const { return {x, y}; }
};

enum class Frame { kGlobal, kAgent };

std::string_view FrameName(Frame frame);

struct Trajectory {
  std::vector<Point2> points;  // positions at t = dt, 2 dt, ..., N dt
  double dt = 0.0;             // seconds
  Frame frame = Frame::kGlobal;

  std::size_t size() const { return points.size(); }
  const double* data() const {
    return reinterpret_cast<const double*>(points.data());
  }
};

// Throws ContractViolation unless the trajectory has >= 1 point, dt > 0 and
// finite coordinates.
void ValidateTrajectory(const Trajectory& traj);

using Ring = std::vector<Point2>;

struct Polygon {
  Ring outer;               // counter-clockwise
  std::vector<Ring> holes;  // clockwise
};

struct PolygonSet {
  std::vector<Polygon> polygons;

  bool empty() const { return polygons.empty(); }
};

// Shoelace area; positive for counter-clockwise rings.
double SignedArea(const Ring& ring);

// Builds a polygon with outer ring reoriented CCW and holes CW.
Polygon MakePolygon(Ring outer, std::vector<Ring> holes = {});

// Rings need >= 3 finite vertices and non-zero area, and no two non-adjacent
// edges of a ring may intersect.
void ValidatePolygonSet(const PolygonSet& area);

enum class FrameDirection { kToAgent, kToGlobal };

Point2 ToAgentFrame(Point2 global, const Pose2& pose);
Point2 ToGlobalFrame(Point2 local, const Pose2& pose);

// Rigid transform between the global frame and the frame of an agent at
// `pose` (x forward, y left). The trajectory's frame tag must match the
// direction's source frame.
Trajectory TransformToFrame(const Trajectory& traj, const Pose2& pose,
                            FrameDirection direction);

// Even-odd containment with an explicit boundary test; points on any edge,
// including hole edges, count as inside.
bool PointInPolygons(Point2 p, const PolygonSet& area);

// Containment step used when checking trajectories against the drivable area;
// equals the default raster resolution.
inline constexpr double kDefaultSampleStep = 0.25;

// True iff every waypoint and every point sampled along each segment at
// spacing <= sample_step lies inside `area`. The segment from the first
// waypoint onward is checked; the agent's current position is not part of the
// trajectory.
bool TrajectoryOnRoad(const Trajectory& traj, const PolygonSet& area,
                      double sample_step = kDefaultSampleStep);

enum class DistanceMetric { kMaxL2, kMeanL2 };

std::string_view MetricName(DistanceMetric metric);
DistanceMetric ParseMetric(std::string_view name);

// (1/N) sum_i |a_i - b_i|.
double MeanL2(const Trajectory& a, const Trajectory& b);
// max_i |a_i - b_i|.
double MaxL2(const Trajectory& a, const Trajectory& b);
double TrajectoryDistance(DistanceMetric metric, const Trajectory& a,
                          const Trajectory& b);

}  // namespace trajcover

#endif  // TRAJCOVER_GEOMETRY_H_
