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

#include "trajcover/synthdata.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "trajcover/contract.h"
#include "trajcover/parallel.h"
#include "trajcover/rng.h"

namespace trajcover {
namespace {

constexpr double kMinTurnRadius = 12.0;   // meters
constexpr double kBackExtension = 25.0;   // road behind the history start
constexpr double kFrontExtension = 60.0;  // road beyond the extended path
constexpr double kExtraLookahead = 2.0;   // seconds of motion past the horizon
constexpr double kCenterlineSpacing = 1.0;
constexpr double kBranchLength = 30.0;

enum class RoadKind { kStraight, kArc, kTIntersection };

Point2 Heading(double yaw) { return {std::cos(yaw), std::sin(yaw)}; }
Point2 LeftNormal(Point2 dir) { return {-dir.y, dir.x}; }

Point2 Unit(Point2 v) {
  const double n = Norm(v);
  return n > 0.0 ? (1.0 / n) * v : Point2{1.0, 0.0};
}

// Arc-length resampling; drops repeated points.
Polyline Resample(const Polyline& in, double spacing) {
  Polyline out{in.front()};
  double carry = 0.0;
  for (std::size_t i = 1; i < in.size(); ++i) {
    const Point2 a = in[i - 1];
    const Point2 b = in[i];
    const double len = Norm(b - a);
    if (len == 0.0) continue;
    double s = spacing - carry;
    while (s <= len) {
      out.push_back(a + (s / len) * (b - a));
      s += spacing;
    }
    carry = len - (s - spacing);
  }
  if (Norm(in.back() - out.back()) > 1e-6) out.push_back(in.back());
  return out;
}

std::vector<Point2> Tangents(const Polyline& line) {
  std::vector<Point2> out(line.size());
  for (std::size_t i = 0; i < line.size(); ++i) {
    const Point2 prev = line[i == 0 ? 0 : i - 1];
    const Point2 next = line[std::min(i + 1, line.size() - 1)];
    out[i] = Unit(next - prev);
  }
  return out;
}

Polyline Offset(const Polyline& line, const std::vector<Point2>& tangents,
                double lateral) {
  Polyline out(line.size());
  for (std::size_t i = 0; i < line.size(); ++i) {
    out[i] = line[i] + lateral * LeftNormal(tangents[i]);
  }
  return out;
}

std::size_t NearestIndex(const Polyline& line, Point2 p) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < line.size(); ++i) {
    if (Norm(line[i] - p) < Norm(line[best] - p)) best = i;
  }
  return best;
}

RoadKind PickRoad(const RoadMix& mix, Rng& rng) {
  const double total = mix.straight + mix.arc + mix.t_intersection;
  const double u = rng.Uniform() * total;
  if (u < mix.straight) return RoadKind::kStraight;
  if (u < mix.straight + mix.arc) return RoadKind::kArc;
  return RoadKind::kTIntersection;
}

bool IsTurning(MotionModel m) {
  return m == MotionModel::kCvCyr || m == MotionModel::kCaCyr;
}

bool IsAccelerating(MotionModel m) {
  return m == MotionModel::kCaCy || m == MotionModel::kCaCyr;
}

struct MotionDraw {
  MotionModel model;
  AgentKinematics start;  // at the first history frame, local frame
};

MotionDraw DrawMotion(const ScenarioSpec& spec, RoadKind road, Rng& rng) {
  const bool turning = road == RoadKind::kArc;
  const bool accelerating = rng.Bernoulli(0.5);
  const MotionModel model =
      turning ? (accelerating ? MotionModel::kCaCyr : MotionModel::kCvCyr)
              : (accelerating ? MotionModel::kCaCy : MotionModel::kCvCy);
  const double history = spec.history_window;
  const double horizon = spec.prediction_horizon + kExtraLookahead;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const double v_now = rng.Uniform(spec.speed_min, spec.speed_max);
    double accel = 0.0;
    if (accelerating) {
      accel = rng.Uniform(0.5, 2.0) * (rng.Bernoulli(0.5) ? 1.0 : -1.0);
    }
    const double v_start = v_now - accel * history;
    const double v_end = v_now + accel * horizon;
    if (v_start < 0.5 || v_end < 0.5) continue;
    double yaw_rate = 0.0;
    if (turning) {
      const double v_min = std::min(v_start, v_end);
      const double limit = std::min(0.3, v_min / kMinTurnRadius);
      if (limit < 0.05) continue;
      yaw_rate = rng.Uniform(0.05, limit) * (rng.Bernoulli(0.5) ? 1.0 : -1.0);
    }
    AgentKinematics start;
    start.speed = v_start;
    start.accel = accel;
    start.yaw_rate = yaw_rate;
    return {model, start};
  }
  throw ContractViolation("speed range admits no feasible motion");
}

// Rigid map taking `from` onto `to`.
struct Placement {
  Pose2 from;
  Pose2 to;

  Point2 Apply(Point2 p) const {
    return ToGlobalFrame(ToAgentFrame(p, from), to);
  }
  Pose2 Apply(const Pose2& pose) const {
    const Point2 p = Apply(pose.position());
    return Pose2::Make(p.x, p.y, pose.yaw - from.yaw + to.yaw);
  }
};

AgentState MakeState(double t, const AgentKinematics& kin, double length,
                     double width) {
  return {.t = t, .pose = kin.pose, .speed = kin.speed, .accel = kin.accel,
          .yaw_rate = kin.yaw_rate, .length = length, .width = width};
}

// Straight constant-velocity history ending at `now`.
Agent StraightAgent(std::string id, AgentType type, Pose2 now, double speed,
                    int frames, double dt, double t_now, double length,
                    double width) {
  Agent agent{.id = std::move(id), .type = type, .states = {}};
  const Point2 dir = Heading(now.yaw);
  for (int j = 0; j <= frames; ++j) {
    const double back = (frames - j) * dt;
    const Point2 p = now.position() - (speed * back) * dir;
    AgentKinematics kin;
    kin.pose = Pose2::Make(p.x, p.y, now.yaw);
    kin.speed = speed;
    agent.states.push_back(MakeState(t_now - back, kin, length, width));
  }
  return agent;
}

std::string SceneId(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "scene_%05d", index);
  return buf;
}

}  // namespace

void ValidateScenarioSpec(const ScenarioSpec& spec) {
  Require(spec.n_scenes >= 0, "n_scenes must be >= 0");
  Require(spec.lanes >= 1, "at least one lane required");
  Require(spec.vehicle_width > 0.0 && spec.vehicle_length > 0.0,
          "vehicle extents must be positive");
  Require(spec.lane_width > spec.vehicle_width,
          "infeasible scenario: vehicle is wider than the lane");
  Require(spec.speed_min > 0.5 && spec.speed_max >= spec.speed_min,
          "speed range must satisfy 0.5 < speed_min <= speed_max");
  Require(spec.freq > 0.0 && spec.history_window >= 0.0 &&
              spec.prediction_horizon > 0.0,
          "horizons and frequency must be positive");
  Require(HorizonPoints(spec.prediction_horizon, spec.freq) >= 1,
          "prediction horizon shorter than one step");
  Require(spec.lateral_noise >= 0.0 && spec.lateral_noise < 0.5 * spec.lane_width,
          "lateral noise must be in [0, lane_width / 2)");
  Require(spec.max_distractors >= 0, "max_distractors must be >= 0");
  const RoadMix& m = spec.road_mix;
  Require(m.straight >= 0.0 && m.arc >= 0.0 && m.t_intersection >= 0.0 &&
              m.straight + m.arc + m.t_intersection > 0.0,
          "road mix needs a positive weight");
}

GeneratedScene GenerateScene(const ScenarioSpec& spec, int index) {
  ValidateScenarioSpec(spec);
  Rng rng(DeriveSeed("scene-" + std::to_string(index), spec.seed));
  const double dt = 1.0 / spec.freq;
  const int history_frames =
      static_cast<int>(std::llround(spec.history_window * spec.freq));
  const double t_now = history_frames * dt;
  const double road_width = spec.lanes * spec.lane_width;

  for (int attempt = 0;; ++attempt) {
    Require(attempt < 100, "could not generate a valid road layout");
    const RoadKind road = PickRoad(spec.road_mix, rng);
    const MotionDraw motion = DrawMotion(spec, road, rng);

    // Target history in a local frame, then placed at a random global pose.
    std::vector<AgentKinematics> local{motion.start};
    for (int j = 0; j < history_frames; ++j) {
      local.push_back(StepKinematics(local.back(), motion.model, dt));
    }
    const Placement place{local.back().pose,
                          Pose2::Make(rng.Uniform(-500.0, 500.0),
                                      rng.Uniform(-500.0, 500.0),
                                      rng.Uniform(-std::numbers::pi, std::numbers::pi))};
    std::vector<AgentKinematics> history;
    for (AgentKinematics kin : local) {
      kin.pose = place.Apply(kin.pose);
      history.push_back(kin);
    }
    const AgentKinematics now = history.back();

    // Road centerline: straight run-up, the motion itself, some lookahead
    // and a straight run-out.
    Polyline center;
    center.push_back(history.front().pose.position() -
                     kBackExtension * Heading(history.front().pose.yaw));
    for (const AgentKinematics& k : history) center.push_back(k.pose.position());
    AgentKinematics ahead = now;
    const int lookahead_frames = static_cast<int>(std::llround(
        (spec.prediction_horizon + kExtraLookahead) * spec.freq));
    for (int j = 0; j < lookahead_frames; ++j) {
      ahead = StepKinematics(ahead, motion.model, dt);
      center.push_back(ahead.pose.position());
    }
    center.push_back(ahead.pose.position() +
                     kFrontExtension * Heading(ahead.pose.yaw));
    center = Resample(center, kCenterlineSpacing);
    const std::vector<Point2> tangents = Tangents(center);

    const int target_lane = static_cast<int>(rng.Below(spec.lanes));
    const double right_width = (target_lane + 0.5) * spec.lane_width;
    const double left_width = road_width - right_width;

    Ring corridor = Offset(center, tangents, left_width);
    const Polyline right_edge = Offset(center, tangents, -right_width);
    corridor.insert(corridor.end(), right_edge.rbegin(), right_edge.rend());

    MapData map;
    map.drivable.polygons.push_back(MakePolygon(std::move(corridor)));
    for (int lane = 0; lane < spec.lanes; ++lane) {
      map.lanes.push_back(
          Offset(center, tangents, (lane + 0.5) * spec.lane_width - right_width));
    }
    if (road == RoadKind::kTIntersection) {
      const std::size_t origin = NearestIndex(center, now.pose.position());
      const std::size_t at = std::min(
          center.size() - 1,
          origin + static_cast<std::size_t>(rng.Uniform(15.0, 50.0) / kCenterlineSpacing));
      const double side = rng.Bernoulli(0.5) ? 1.0 : -1.0;
      const Point2 t = tangents[at];
      const Point2 out = side * LeftNormal(t);
      const Point2 base = center[at];
      const double half = 0.5 * road_width;
      const double reach = kBranchLength + (side > 0 ? left_width : right_width);
      map.drivable.polygons.push_back(MakePolygon(
          {base - half * t, base + half * t, base + half * t + reach * out,
           base - half * t + reach * out}));
      map.lanes.push_back({base, base + reach * out});
    }
    try {
      ValidatePolygonSet(map.drivable);
    } catch (const ContractViolation&) {
      continue;
    }

    // Future: exact rollout from the state at t_now, plus a bounded lateral
    // ramp that is dropped if it would leave the road.
    const Trajectory clean =
        Rollout(now, motion.model, spec.prediction_horizon, spec.freq);
    Trajectory future = clean;
    bool clipped = false;
    if (spec.lateral_noise > 0.0) {
      const double amplitude = rng.Uniform(-spec.lateral_noise, spec.lateral_noise);
      const double yaw_rate = IsTurning(motion.model) ? now.yaw_rate : 0.0;
      const std::size_t n = future.size();
      for (std::size_t i = 0; i < n; ++i) {
        const double yaw = now.pose.yaw + yaw_rate * (i + 1) * dt;
        const double ramp = static_cast<double>(i + 1) / static_cast<double>(n);
        future.points[i] =
            future.points[i] + (amplitude * ramp) * LeftNormal(Heading(yaw));
      }
      if (!TrajectoryOnRoad(future, map.drivable)) {
        future = clean;
        clipped = true;
      }
    }
    if (!TrajectoryOnRoad(future, map.drivable)) continue;

    SceneContext ctx;
    ctx.map = std::move(map);
    ctx.t_now = t_now;
    ctx.history_window = spec.history_window;
    ctx.prediction_horizon = spec.prediction_horizon;
    ctx.freq = spec.freq;
    ctx.target_id = "agent_0";

    Agent target{.id = "agent_0", .type = AgentType::kVehicle, .states = {}};
    for (int j = 0; j <= history_frames; ++j) {
      AgentKinematics kin = history[j];
      if (!IsAccelerating(motion.model)) kin.accel = 0.0;
      if (!IsTurning(motion.model)) kin.yaw_rate = 0.0;
      target.states.push_back(
          MakeState(j * dt, kin, spec.vehicle_length, spec.vehicle_width));
    }
    ctx.agents.push_back(std::move(target));

    const int distractors = static_cast<int>(rng.Below(spec.max_distractors + 1));
    const std::size_t origin = NearestIndex(center, now.pose.position());
    for (int d = 0; d < distractors; ++d) {
      const std::string id = "agent_" + std::to_string(d + 1);
      const double along = rng.Uniform(-15.0, 60.0);
      const auto at = static_cast<std::size_t>(std::clamp<double>(
          static_cast<double>(origin) + along / kCenterlineSpacing, 0.0,
          static_cast<double>(center.size() - 1)));
      const Point2 t = tangents[at];
      const double yaw = std::atan2(t.y, t.x);
      if (rng.Bernoulli(0.75)) {
        int lane = static_cast<int>(rng.Below(spec.lanes));
        if (lane == target_lane && std::abs(along) < 10.0) {
          lane = (lane + 1) % spec.lanes;
          if (lane == target_lane) continue;
        }
        const Point2 p = center[at] +
                         ((lane + 0.5) * spec.lane_width - right_width) * LeftNormal(t);
        ctx.agents.push_back(StraightAgent(
            id, AgentType::kVehicle, Pose2::Make(p.x, p.y, yaw),
            rng.Uniform(2.0, 12.0), history_frames, dt, t_now,
            spec.vehicle_length, spec.vehicle_width));
      } else {
        const double side = rng.Bernoulli(0.5) ? 1.0 : -1.0;
        const double edge = side > 0 ? left_width : right_width;
        const Point2 p = center[at] + side * (edge + rng.Uniform(0.5, 3.0)) * LeftNormal(t);
        ctx.agents.push_back(StraightAgent(
            id, AgentType::kPedestrian,
            Pose2::Make(p.x, p.y, rng.Uniform(-std::numbers::pi, std::numbers::pi)),
            rng.Uniform(0.3, 1.5), history_frames, dt, t_now,
            kImputedPedestrianSize, kImputedPedestrianSize));
      }
    }

    GeneratedScene out{.scene = {}, .model = motion.model, .noise_clipped = clipped};
    out.scene.scene_id = SceneId(index);
    out.scene.context = std::move(ctx);
    out.scene.future = std::move(future);
    return out;
  }
}

std::vector<Scene> Generate(const ScenarioSpec& spec) {
  ValidateScenarioSpec(spec);
  std::vector<Scene> scenes(static_cast<std::size_t>(spec.n_scenes));
  ParallelFor(scenes.size(), [&](std::size_t i) {
    scenes[i] = GenerateScene(spec, static_cast<int>(i)).scene;
  });
  return scenes;
}

SceneSplit Split(std::span<const Scene> scenes, double train_fraction,
                 double val_fraction, std::uint64_t seed) {
  Require(train_fraction >= 0.0 && val_fraction >= 0.0 &&
              train_fraction + val_fraction <= 1.0 + 1e-12,
          "split fractions must be nonnegative and sum to <= 1");
  const std::size_t n = scenes.size();
  auto count = [n](double f) {
    return std::min(n, static_cast<std::size_t>(
                           std::ceil(f * static_cast<double>(n) - 1e-9)));
  };
  const std::size_t n_train = count(train_fraction);
  const std::size_t n_val = std::min(n - n_train, count(val_fraction));
  const std::vector<std::size_t> order =
      SeededPermutation(n, DeriveSeed("split", seed));
  std::vector<std::size_t> train(order.begin(), order.begin() + n_train);
  std::vector<std::size_t> val(order.begin() + n_train,
                               order.begin() + n_train + n_val);
  std::sort(train.begin(), train.end());
  std::sort(val.begin(), val.end());
  SceneSplit out;
  for (std::size_t i : train) out.train.push_back(scenes[i]);
  for (std::size_t i : val) out.val.push_back(scenes[i]);
  return out;
}

}  // namespace trajcover
