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

#include "trajcover/scene.h"

#include <cmath>
#include <string>

#include "trajcover/contract.h"

namespace trajcover {

std::string_view AgentTypeName(AgentType type) {
  return type == AgentType::kVehicle ? "vehicle" : "pedestrian";
}

AgentType ParseAgentType(std::string_view name) {
  if (name == "vehicle") return AgentType::kVehicle;
  if (name == "pedestrian") return AgentType::kPedestrian;
  throw ContractViolation("unknown agent type: " + std::string(name));
}

const Agent* SceneContext::FindAgent(std::string_view id) const {
  for (const Agent& a : agents) {
    if (a.id == id) return &a;
  }
  return nullptr;
}

const Agent& SceneContext::Target() const {
  const Agent* target = FindAgent(target_id);
  Require(target != nullptr, "target agent '" + target_id + "' is missing");
  Require(!target->states.empty(), "target agent has no states");
  return *target;
}

const AgentState& SceneContext::TargetState() const {
  const Agent& target = Target();
  const AgentState* latest = nullptr;
  for (const AgentState& s : target.states) {
    if (s.t <= t_now + 1e-9) latest = &s;
  }
  Require(latest != nullptr, "target has no state at or before t_now");
  return *latest;
}

AgentKinematics SceneContext::TargetKinematics() const {
  const AgentState& s = TargetState();
  return {.pose = s.pose, .speed = s.speed, .accel = s.accel,
          .yaw_rate = s.yaw_rate};
}

void ValidateSceneContext(const SceneContext& ctx) {
  Require(ctx.freq > 0.0, "freq must be > 0");
  Require(ctx.history_window >= 0.0, "history window must be >= 0");
  Require(ctx.prediction_horizon > 0.0, "prediction horizon must be > 0");
  ctx.Target();
  ValidatePolygonSet(ctx.map.drivable);
  const double step = 1.0 / ctx.freq;
  for (const Agent& a : ctx.agents) {
    for (std::size_t i = 0; i < a.states.size(); ++i) {
      Require(a.states[i].t <= ctx.t_now + 1e-9,
              "agent history extends past t_now");
      if (i > 0) {
        Require(std::abs(a.states[i].t - a.states[i - 1].t - step) < 1e-6,
                "agent history is not uniformly spaced at 1 / freq");
      }
    }
  }
}

Trajectory FutureInAgentFrame(const Scene& scene) {
  return TransformToFrame(scene.future, scene.context.TargetState().pose,
                          FrameDirection::kToAgent);
}

}  // namespace trajcover
