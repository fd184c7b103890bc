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
#include <set>
#include <string>

#include "gtest/gtest.h"
#include "trajcover/contract.h"
#include "trajcover/scene_io.h"

namespace trajcover {
namespace {

ScenarioSpec SmallSpec(std::uint64_t seed = 0, int n = 80) {
  ScenarioSpec spec;
  spec.seed = seed;
  spec.n_scenes = n;
  return spec;
}

TEST(GenerateTest, DeterministicPerSeed) {
  const auto a = Generate(SmallSpec(3, 20));
  const auto b = Generate(SmallSpec(3, 20));
  const auto c = Generate(SmallSpec(4, 20));
  ASSERT_EQ(a.size(), 20u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(SceneToText(a[i]), SceneToText(b[i]));
  }
  EXPECT_NE(SceneToText(a[0]), SceneToText(c[0]));
  EXPECT_EQ(SceneToText(GenerateScene(SmallSpec(3, 20), 7).scene), SceneToText(a[7]));
}

TEST(GenerateTest, SceneStructure) {
  const ScenarioSpec spec = SmallSpec(5);
  const std::size_t n_future = HorizonPoints(spec.prediction_horizon, spec.freq);
  const std::size_t n_history =
      static_cast<std::size_t>(std::lround(spec.history_window * spec.freq)) + 1;
  std::set<std::string> ids;
  for (const Scene& s : Generate(spec)) {
    EXPECT_TRUE(ids.insert(s.scene_id).second);
    EXPECT_NO_THROW(ValidateSceneContext(s.context));
    EXPECT_EQ(s.future.size(), n_future);
    EXPECT_EQ(s.future.frame, Frame::kGlobal);
    EXPECT_FALSE(s.context.map.drivable.empty());
    EXPECT_FALSE(s.context.map.lanes.empty());
    EXPECT_LE(s.context.agents.size(), 1u + static_cast<std::size_t>(spec.max_distractors));
    EXPECT_EQ(s.context.Target().states.size(), n_history);
    EXPECT_DOUBLE_EQ(s.context.t_now, spec.history_window);
    EXPECT_GE(s.context.TargetState().speed, spec.speed_min);
    EXPECT_LE(s.context.TargetState().speed, spec.speed_max);
  }
}

TEST(GenerateTest, GroundTruthStaysOnRoad) {
  for (std::uint64_t seed : {0, 1, 2}) {
    for (const Scene& s : Generate(SmallSpec(seed, 150))) {
      EXPECT_TRUE(TrajectoryOnRoad(s.future, s.context.map.drivable)) << s.scene_id;
    }
  }
}

TEST(GenerateTest, TimestampsUniformWithoutTeleport) {
  const ScenarioSpec spec = SmallSpec(6);
  const double dt = 1.0 / spec.freq;
  const double v_max = spec.speed_max + 2.0 * spec.prediction_horizon;
  for (const Scene& s : Generate(spec)) {
    for (const Agent& a : s.context.agents) {
      for (std::size_t i = 1; i < a.states.size(); ++i) {
        EXPECT_NEAR(a.states[i].t - a.states[i - 1].t, dt, 1e-9);
      }
    }
    std::vector<Point2> path;
    for (const AgentState& st : s.context.Target().states) path.push_back(st.pose.position());
    path.insert(path.end(), s.future.points.begin(), s.future.points.end());
    for (std::size_t i = 1; i < path.size(); ++i) {
      const double step = std::hypot(path[i].x - path[i - 1].x, path[i].y - path[i - 1].y);
      EXPECT_LE(step, v_max * dt + spec.lateral_noise) << s.scene_id << " point " << i;
    }
  }
}

TEST(GenerateTest, StraightRoadsMatchPhysicsOracle) {
  ScenarioSpec spec = SmallSpec(0, 200);
  spec.road_mix = RoadMix{1.0, 0.0, 0.0};
  int close = 0;
  for (const Scene& s : Generate(spec)) {
    const OracleResult r = PhysicsOracle(s.context.TargetKinematics(), s.future,
                                         spec.prediction_horizon, spec.freq);
    if (r.ade <= 0.25) ++close;
  }
  EXPECT_GE(close, 180);
}

TEST(GenerateTest, NoiseFreeFuturesAreExactRollouts) {
  ScenarioSpec spec = SmallSpec(8, 40);
  spec.lateral_noise = 0.0;
  for (int i = 0; i < spec.n_scenes; ++i) {
    const GeneratedScene g = GenerateScene(spec, i);
    const Trajectory roll = Rollout(g.scene.context.TargetKinematics(), g.model,
                                    spec.prediction_horizon, spec.freq);
    for (std::size_t p = 0; p < roll.size(); ++p) {
      EXPECT_NEAR(roll.points[p].x, g.scene.future.points[p].x, 1e-9);
      EXPECT_NEAR(roll.points[p].y, g.scene.future.points[p].y, 1e-9);
    }
  }
}

TEST(GenerateTest, InfeasibleSpecsThrow) {
  ScenarioSpec narrow = SmallSpec();
  narrow.lane_width = 1.5;
  EXPECT_THROW(Generate(narrow), ContractViolation);
  ScenarioSpec no_lanes = SmallSpec();
  no_lanes.lanes = 0;
  EXPECT_THROW(Generate(no_lanes), ContractViolation);
  ScenarioSpec slow = SmallSpec();
  slow.speed_min = 5.0;
  slow.speed_max = 4.0;
  EXPECT_THROW(Generate(slow), ContractViolation);
  ScenarioSpec no_roads = SmallSpec();
  no_roads.road_mix = RoadMix{0.0, 0.0, 0.0};
  EXPECT_THROW(Generate(no_roads), ContractViolation);
}

std::vector<Scene> Named(int n) {
  std::vector<Scene> scenes(n);
  for (int i = 0; i < n; ++i) scenes[i].scene_id = "s" + std::to_string(i);
  return scenes;
}

std::set<std::string> Ids(const std::vector<Scene>& scenes) {
  std::set<std::string> out;
  for (const Scene& s : scenes) out.insert(s.scene_id);
  return out;
}

TEST(SplitTest, Examples) {
  const auto scenes = Named(1000);
  EXPECT_EQ(Split(scenes, 1.0, 0.0, 1).train.size(), 1000u);
  const SceneSplit tenth = Split(scenes, 0.1, 0.0, 1);
  EXPECT_EQ(tenth.train.size(), 100u);
  EXPECT_TRUE(tenth.val.empty());
  EXPECT_THROW(Split(scenes, 0.8, 0.3, 1), ContractViolation);
}

TEST(SplitTest, DisjointAndStable) {
  const auto scenes = Named(257);
  const SceneSplit a = Split(scenes, 0.8, 0.2, 9);
  const SceneSplit b = Split(scenes, 0.8, 0.2, 9);
  EXPECT_EQ(Ids(a.train), Ids(b.train));
  EXPECT_EQ(a.train.size() + a.val.size(), 257u);
  const auto train = Ids(a.train);
  for (const Scene& s : a.val) EXPECT_EQ(train.count(s.scene_id), 0u);
  EXPECT_NE(Ids(Split(scenes, 0.8, 0.2, 10).train), train);
}

}  // namespace
}  // namespace trajcover
