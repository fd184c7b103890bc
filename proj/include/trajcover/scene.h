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

#ifndef TRAJCOVER_SCENE_H_
#define TRAJCOVER_SCENE_H_

#include <string>
#include <string_view>
#include <vector>

#include "trajcover/geometry.h"
#include "trajcover/physics.h"

namespace trajcover {

enum class AgentType { kVehicle, kPedestrian };

std::string_view AgentTypeName(AgentType type);
AgentType ParseAgentType(std::string_view name);

// Box extents used when a source provides none.
inline constexpr double kImputedVehicleLength = 4.5;
inline constexpr double kImputedVehicleWidth = 2.0;
inline constexpr double kImputedPedestrianSize = 0.6;

struct AgentState {
  double t = 0.0;  // seconds
  Pose2 pose;
  double speed = 0.0;
  double accel = 0.0;
  double yaw_rate = 0.0;
  double length = 0.0;  // <= 0 means unknown; imputed from the agent type
  double width = 0.0;
};

struct Agent {
  std::string id;
  AgentType type = AgentType::kVehicle;
  std::vector<AgentState> states;  // increasing t
};

using Polyline = std::vector<Point2>;

struct MapData {
  PolygonSet drivable;
  std::vector<Polyline> lanes;
};

struct SceneContext {
  MapData map;
  std::vector<Agent> agents;
  std::string target_id;
  double t_now = 0.0;
  double history_window = 0.0;      // seconds
  double prediction_horizon = 0.0;  // seconds
  double freq = 0.0;                // Hz

  const Agent* FindAgent(std::string_view id) const;
  // Throws ContractViolation when the target is missing.
  const Agent& Target() const;
  // State of the target at t_now (latest state not after t_now).
  const AgentState& TargetState() const;
  AgentKinematics TargetKinematics() const;
};

// Target present, history timestamps <= t_now and spaced 1 / freq, horizons
// and frequency positive.
void ValidateSceneContext(const SceneContext& ctx);

// A context plus the target's recorded future (global frame).
struct Scene {
  std::string scene_id;
  SceneContext context;
  Trajectory future;
};

// Future expressed in the target's frame at t_now.
Trajectory FutureInAgentFrame(const Scene& scene);

}  // namespace trajcover

#endif  // TRAJCOVER_SCENE_H_
