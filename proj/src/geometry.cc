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

#include "trajcover/geometry.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "trajcover/contract.h"
#include "trajcover/simd/kernels.h"

namespace trajcover {
namespace {

constexpr double kBoundaryTolerance = 1e-9;

double Cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }

bool OnSegment(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const Point2 ap = p - a;
  const double len = Norm(ab);
  if (len == 0.0) return Norm(ap) <= kBoundaryTolerance;
  // Perpendicular distance within tolerance and projection inside [a, b].
  if (std::abs(Cross(ab, ap)) / len > kBoundaryTolerance) return false;
  const double t = (ab.x * ap.x + ab.y * ap.y) / (len * len);
  return t >= -kBoundaryTolerance / len && t <= 1.0 + kBoundaryTolerance / len;
}

// Returns +1 inside, 0 on the boundary, -1 outside.
int ClassifyInRing(Point2 p, const Ring& ring) {
  bool inside = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2 a = ring[j];
    const Point2 b = ring[i];
    if (OnSegment(p, a, b)) return 0;
    if ((b.y > p.y) != (a.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside ? 1 : -1;
}

bool InBoundingBox(Point2 p, const Ring& ring) {
  double min_x = ring[0].x, max_x = ring[0].x;
  double min_y = ring[0].y, max_y = ring[0].y;
  for (const Point2& v : ring) {
    min_x = std::min(min_x, v.x);
    max_x = std::max(max_x, v.x);
    min_y = std::min(min_y, v.y);
    max_y = std::max(max_y, v.y);
  }
  return p.x >= min_x - kBoundaryTolerance && p.x <= max_x + kBoundaryTolerance &&
         p.y >= min_y - kBoundaryTolerance && p.y <= max_y + kBoundaryTolerance;
}

bool PointInPolygon(Point2 p, const Polygon& polygon) {
  if (!InBoundingBox(p, polygon.outer)) return false;
  const int outer = ClassifyInRing(p, polygon.outer);
  if (outer < 0) return false;
  if (outer == 0) return true;
  for (const Ring& hole : polygon.holes) {
    // Strictly inside a hole is off the area; its edge is still boundary.
    if (ClassifyInRing(p, hole) > 0) return false;
  }
  return true;
}

bool SegmentsIntersect(Point2 a, Point2 b, Point2 c, Point2 d) {
  const double d1 = Cross(b - a, c - a);
  const double d2 = Cross(b - a, d - a);
  const double d3 = Cross(d - c, a - c);
  const double d4 = Cross(d - c, b - c);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  return (d1 == 0 && OnSegment(c, a, b)) || (d2 == 0 && OnSegment(d, a, b)) ||
         (d3 == 0 && OnSegment(a, c, d)) || (d4 == 0 && OnSegment(b, c, d));
}

void ValidateRing(const Ring& ring) {
  Require(ring.size() >= 3, "polygon ring needs at least 3 vertices");
  for (const Point2& v : ring) {
    Require(std::isfinite(v.x) && std::isfinite(v.y),
            "polygon vertex is not finite");
  }
  Require(SignedArea(ring) != 0.0, "polygon ring has zero area");
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent through the wrap
      Require(!SegmentsIntersect(ring[i], ring[(i + 1) % n], ring[j],
                                 ring[(j + 1) % n]),
              "polygon ring self-intersects");
    }
  }
}

}  // namespace

double NormalizeAngle(double radians) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double a = std::fmod(radians, kTwoPi);
  if (a <= -std::numbers::pi) a += kTwoPi;
  if (a > std::numbers::pi) a -= kTwoPi;
  return a;
}

std::string_view FrameName(Frame frame) {
  return frame == Frame::kGlobal ? "global" : "agent";
}

void ValidateTrajectory(const Trajectory& traj) {
  Require(!traj.points.empty(), "trajectory has no points");
  Require(traj.dt > 0.0 && std::isfinite(traj.dt), "trajectory dt must be > 0");
  for (const Point2& p : traj.points) {
    Require(std::isfinite(p.x) && std::isfinite(p.y),
            "trajectory coordinate is not finite");
  }
}

double SignedArea(const Ring& ring) {
  double twice = 0.0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    twice += Cross(ring[j], ring[i]);
  }
  return 0.5 * twice;
}

Polygon MakePolygon(Ring outer, std::vector<Ring> holes) {
  if (SignedArea(outer) < 0.0) std::reverse(outer.begin(), outer.end());
  for (Ring& hole : holes) {
    if (SignedArea(hole) > 0.0) std::reverse(hole.begin(), hole.end());
  }
  return Polygon{std::move(outer), std::move(holes)};
}

void ValidatePolygonSet(const PolygonSet& area) {
  for (const Polygon& polygon : area.polygons) {
    ValidateRing(polygon.outer);
    Require(SignedArea(polygon.outer) > 0.0, "outer ring must be CCW");
    for (const Ring& hole : polygon.holes) {
      ValidateRing(hole);
      Require(SignedArea(hole) < 0.0, "hole ring must be CW");
    }
  }
}

Point2 ToAgentFrame(Point2 global, const Pose2& pose) {
  const double c = std::cos(pose.yaw);
  const double s = std::sin(pose.yaw);
  const double dx = global.x - pose.x;
  const double dy = global.y - pose.y;
  return {c * dx + s * dy, -s * dx + c * dy};
}

Point2 ToGlobalFrame(Point2 local, const Pose2& pose) {
  const double c = std::cos(pose.yaw);
  const double s = std::sin(pose.yaw);
  return {pose.x + c * local.x - s * local.y, pose.y + s * local.x + c * local.y};
}

Trajectory TransformToFrame(const Trajectory& traj, const Pose2& pose,
                            FrameDirection direction) {
  const bool to_agent = direction == FrameDirection::kToAgent;
  Require(traj.frame == (to_agent ? Frame::kGlobal : Frame::kAgent),
          std::string("frame mismatch: trajectory is in ") +
              std::string(FrameName(traj.frame)) + " frame");
  Trajectory out{.points = {}, .dt = traj.dt,
                 .frame = to_agent ? Frame::kAgent : Frame::kGlobal};
  out.points.reserve(traj.points.size());
  for (const Point2& p : traj.points) {
    out.points.push_back(to_agent ? ToAgentFrame(p, pose)
                                  : ToGlobalFrame(p, pose));
  }
  return out;
}

bool PointInPolygons(Point2 p, const PolygonSet& area) {
  return std::any_of(area.polygons.begin(), area.polygons.end(),
                     [p](const Polygon& poly) { return PointInPolygon(p, poly); });
}

bool TrajectoryOnRoad(const Trajectory& traj, const PolygonSet& area,
                      double sample_step) {
  Require(!traj.points.empty(), "trajectory has no points");
  Require(sample_step > 0.0, "sample_step must be > 0");
  if (!PointInPolygons(traj.points.front(), area)) return false;
  for (std::size_t i = 1; i < traj.points.size(); ++i) {
    const Point2 a = traj.points[i - 1];
    const Point2 b = traj.points[i];
    const int pieces =
        std::max(1, static_cast<int>(std::ceil(Norm(b - a) / sample_step)));
    for (int k = 1; k <= pieces; ++k) {
      const double t = static_cast<double>(k) / pieces;
      if (!PointInPolygons(a + t * (b - a), area)) return false;
    }
  }
  return true;
}

std::string_view MetricName(DistanceMetric metric) {
  return metric == DistanceMetric::kMaxL2 ? "max_l2" : "mean_l2";
}

DistanceMetric ParseMetric(std::string_view name) {
  if (name == "max_l2") return DistanceMetric::kMaxL2;
  if (name == "mean_l2") return DistanceMetric::kMeanL2;
  throw ContractViolation("unknown distance metric: " + std::string(name));
}

namespace {

simd::DistanceSummary Summarize(const Trajectory& a, const Trajectory& b) {
  Require(a.size() == b.size(), "trajectory length mismatch");
  Require(!a.points.empty(), "trajectory has no points");
  return simd::ActiveKernels().pointwise_distance(a.data(), b.data(), a.size());
}

}  // namespace

double MeanL2(const Trajectory& a, const Trajectory& b) {
  return Summarize(a, b).sum / static_cast<double>(a.size());
}

double MaxL2(const Trajectory& a, const Trajectory& b) {
  return Summarize(a, b).max;
}

double TrajectoryDistance(DistanceMetric metric, const Trajectory& a,
                          const Trajectory& b) {
  return metric == DistanceMetric::kMaxL2 ? MaxL2(a, b) : MeanL2(a, b);
}

}  // namespace trajcover
