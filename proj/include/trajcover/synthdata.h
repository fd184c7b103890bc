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

#ifndef TRAJCOVER_SYNTHDATA_H_
#define TRAJCOVER_SYNTHDATA_H_

#include <cstdint>
#include <span>
#include <vector>

#include "trajcover/physics.h"
#include "trajcover/scene.h"

namespace trajcover {

// Relative weights of the road layouts.
struct RoadMix {
  double straight = 1.0;
  double arc = 1.0;
  double t_intersection = 1.0;
};

struct ScenarioSpec {
  std::uint64_t seed = 0;
  int n_scenes = 100;
  RoadMix road_mix;
  double lane_width = 3.5;  // meters
  int lanes = 2;
  double speed_min = 2.0;  // m/s at t_now
  double speed_max = 15.0;
  double history_window = 2.0;      // seconds
  double prediction_horizon = 3.0;  // seconds
  double freq = 10.0;               // Hz
  double lateral_noise = 0.2;       // meters, bound on the future perturbation
  int max_distractors = 4;
  double vehicle_length = 4.5;
  double vehicle_width = 2.0;
};

// Throws ContractViolation for infeasible specs (vehicle wider than a lane,
// empty road mix, non-positive horizons, ...).
void ValidateScenarioSpec(const ScenarioSpec& spec);

// Scene i is a pure function of (spec, i). The target follows one of the four
// kinematic models over its history and future; the drivable area is a
// corridor built around that motion (plus a side branch for T-intersections),
// so the recorded future always stays on the road.
std::vector<Scene> Generate(const ScenarioSpec& spec);

struct GeneratedScene {
  Scene scene;
  MotionModel model;      // generator of the target's motion
  bool noise_clipped = false;  // perturbation dropped to stay on the road
};

GeneratedScene GenerateScene(const ScenarioSpec& spec, int index);

struct SceneSplit {
  std::vector<Scene> train;
  std::vector<Scene> val;
};

// Seeded disjoint split: the first ceil(train_fraction * n) scenes of a
// seeded permutation go to train, the next ceil(val_fraction * n) to val.
SceneSplit Split(std::span<const Scene> scenes, double train_fraction,
                 double val_fraction, std::uint64_t seed);

}  // namespace trajcover

#endif  // TRAJCOVER_SYNTHDATA_H_
