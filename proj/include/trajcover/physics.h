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

#ifndef TRAJCOVER_PHYSICS_H_
#define TRAJCOVER_PHYSICS_H_

#include <array>
#include <string_view>

#include "trajcover/geometry.h"

namespace trajcover {

struct AgentKinematics {
  Pose2 pose;
  double speed = 0.0;     // m/s, >= 0
  double accel = 0.0;     // m/s^2
  double yaw_rate = 0.0;  // rad/s
};

// The four kinematic baselines, in the order used for tie-breaking.
enum class MotionModel { kCvCy, kCvCyr, kCaCy, kCaCyr };

inline constexpr std::array<MotionModel, 4> kAllMotionModels = {
    MotionModel::kCvCy, MotionModel::kCvCyr, MotionModel::kCaCy,
    MotionModel::kCaCyr};

std::string_view MotionModelName(MotionModel model);
MotionModel ParseMotionModel(std::string_view name);

inline constexpr int kSubstepsPerOutput = 10;

// Number of output points for a horizon sampled at `freq`.
std::size_t HorizonPoints(double horizon_s, double freq_hz);

// Advances `kin` by dt seconds (ten substeps) under `model`. Inputs the model
// ignores (acceleration for constant-velocity models, yaw rate for
// constant-yaw models) are carried through unchanged and unused.
AgentKinematics StepKinematics(const AgentKinematics& kin, MotionModel model,
                               double dt);

// Extrapolates `kin` under `model`. Returns round(horizon * freq) global-frame
// points at t = dt, ..., N dt with dt = 1 / freq. Each output step takes ten
// explicit substeps; within a substep the position advances with the
// substep's mean speed and mid-substep heading, then speed and yaw are
// stepped. Speed never goes below zero.
Trajectory Rollout(const AgentKinematics& kin, MotionModel model,
                   double horizon_s, double freq_hz);

struct OracleResult {
  MotionModel best_model = MotionModel::kCvCy;
  double ade = 0.0;  // meters
};

// Best of the four rollouts by mean point-wise distance to `ground_truth`;
// ties go to the earlier model in kAllMotionModels.
OracleResult PhysicsOracle(const AgentKinematics& kin,
                           const Trajectory& ground_truth, double horizon_s,
                           double freq_hz);

}  // namespace trajcover

#endif  // TRAJCOVER_PHYSICS_H_
