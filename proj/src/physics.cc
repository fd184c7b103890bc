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

#include "trajcover/physics.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "trajcover/contract.h"

namespace trajcover {

std::string_view MotionModelName(MotionModel model) {
  switch (model) {
    case MotionModel::kCvCy:
      return "cv_cy";
    case MotionModel::kCvCyr:
      return "cv_cyr";
    case MotionModel::kCaCy:
      return "ca_cy";
    case MotionModel::kCaCyr:
      return "ca_cyr";
  }
  return "unknown";
}

MotionModel ParseMotionModel(std::string_view name) {
  for (MotionModel m : kAllMotionModels) {
    if (MotionModelName(m) == name) return m;
  }
  throw ContractViolation("unknown motion model: " + std::string(name));
}

std::size_t HorizonPoints(double horizon_s, double freq_hz) {
  return static_cast<std::size_t>(std::llround(horizon_s * freq_hz));
}

namespace {

struct MotionState {
  double x;
  double y;
  double yaw;
  double v;
};

// Ten substeps; position advances with the substep's mean speed along the
// mid-substep heading, so constant-turn motion lands exactly on chords of the
// arc.
void Integrate(MotionState& s, double accel, double yaw_rate, double dt) {
  const double h = dt / kSubstepsPerOutput;
  for (int sub = 0; sub < kSubstepsPerOutput; ++sub) {
    const double v_next = std::max(0.0, s.v + accel * h);
    const double heading = s.yaw + 0.5 * yaw_rate * h;
    const double travel = 0.5 * (s.v + v_next) * h;
    s.x += travel * std::cos(heading);
    s.y += travel * std::sin(heading);
    s.v = v_next;
    s.yaw += yaw_rate * h;
  }
}

void CheckKinematics(const AgentKinematics& kin) {
  Require(std::isfinite(kin.pose.x) && std::isfinite(kin.pose.y) &&
              std::isfinite(kin.pose.yaw) && std::isfinite(kin.speed) &&
              std::isfinite(kin.accel) && std::isfinite(kin.yaw_rate),
          "kinematics must be finite");
  Require(kin.speed >= 0.0, "speed must be >= 0");
}

double EffectiveAccel(const AgentKinematics& kin, MotionModel model) {
  return model == MotionModel::kCaCy || model == MotionModel::kCaCyr ? kin.accel
                                                                     : 0.0;
}

double EffectiveYawRate(const AgentKinematics& kin, MotionModel model) {
  return model == MotionModel::kCvCyr || model == MotionModel::kCaCyr
             ? kin.yaw_rate
             : 0.0;
}

}  // namespace

AgentKinematics StepKinematics(const AgentKinematics& kin, MotionModel model,
                               double dt) {
  CheckKinematics(kin);
  Require(dt > 0.0, "dt must be > 0");
  MotionState s{kin.pose.x, kin.pose.y, kin.pose.yaw, kin.speed};
  Integrate(s, EffectiveAccel(kin, model), EffectiveYawRate(kin, model), dt);
  AgentKinematics out = kin;
  out.pose = Pose2::Make(s.x, s.y, s.yaw);
  out.speed = s.v;
  return out;
}

Trajectory Rollout(const AgentKinematics& kin, MotionModel model,
                   double horizon_s, double freq_hz) {
  Require(horizon_s > 0.0 && freq_hz > 0.0, "horizon and freq must be > 0");
  CheckKinematics(kin);
  const std::size_t n = HorizonPoints(horizon_s, freq_hz);
  Require(n >= 1, "horizon shorter than one output step");
  const double dt = 1.0 / freq_hz;
  const double accel = EffectiveAccel(kin, model);
  const double yaw_rate = EffectiveYawRate(kin, model);

  Trajectory out{.points = {}, .dt = dt, .frame = Frame::kGlobal};
  out.points.reserve(n);
  MotionState s{kin.pose.x, kin.pose.y, kin.pose.yaw, kin.speed};
  for (std::size_t step = 0; step < n; ++step) {
    Integrate(s, accel, yaw_rate, dt);
    out.points.push_back({s.x, s.y});
  }
  return out;
}

OracleResult PhysicsOracle(const AgentKinematics& kin,
                           const Trajectory& ground_truth, double horizon_s,
                           double freq_hz) {
  OracleResult best;
  bool first = true;
  for (MotionModel m : kAllMotionModels) {
    const Trajectory guess = Rollout(kin, m, horizon_s, freq_hz);
    Require(guess.size() == ground_truth.size(),
            "ground truth length does not match the horizon");
    const double ade = MeanL2(guess, ground_truth);
    if (first || ade < best.ade) {
      best = {m, ade};
      first = false;
    }
  }
  return best;
}

}  // namespace trajcover
