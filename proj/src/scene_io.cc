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

#include "trajcover/scene_io.h"

#include <algorithm>

#include "trajcover/contract.h"
#include "trajcover/json_util.h"
#include "trajcover/parallel.h"

namespace trajcover {
namespace {

using nlohmann::json;

json PointsToJson(const std::vector<Point2>& points) {
  json out = json::array();
  for (Point2 p : points) out.push_back({p.x, p.y});
  return out;
}

std::vector<Point2> PointsFromJson(const json& j) {
  std::vector<Point2> out;
  for (const json& p : j) {
    if (!p.is_array() || p.size() != 2) throw DataError("point must be [x, y]");
    out.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return out;
}

}  // namespace

json SceneToJson(const Scene& scene) {
  const SceneContext& ctx = scene.context;
  json drivable = json::array();
  json holes = json::array();
  bool any_holes = false;
  for (const Polygon& poly : ctx.map.drivable.polygons) {
    drivable.push_back(PointsToJson(poly.outer));
    json h = json::array();
    for (const Ring& ring : poly.holes) h.push_back(PointsToJson(ring));
    any_holes = any_holes || !poly.holes.empty();
    holes.push_back(std::move(h));
  }
  json lanes = json::array();
  for (const Polyline& lane : ctx.map.lanes) lanes.push_back(PointsToJson(lane));
  json map = {{"drivable", std::move(drivable)}, {"lanes", std::move(lanes)}};
  if (any_holes) map["drivable_holes"] = std::move(holes);

  json agents = json::array();
  for (const Agent& agent : ctx.agents) {
    json states = json::array();
    for (const AgentState& s : agent.states) {
      states.push_back({{"t", s.t},
                        {"x", s.pose.x},
                        {"y", s.pose.y},
                        {"yaw", s.pose.yaw},
                        {"speed", s.speed},
                        {"accel", s.accel},
                        {"yaw_rate", s.yaw_rate},
                        {"length", s.length},
                        {"width", s.width}});
    }
    agents.push_back({{"id", agent.id},
                      {"type", std::string(AgentTypeName(agent.type))},
                      {"states", std::move(states)}});
  }
  return {{"scene_id", scene.scene_id},
          {"freq_hz", ctx.freq},
          {"map", std::move(map)},
          {"agents", std::move(agents)},
          {"target_id", ctx.target_id},
          {"t_now", ctx.t_now},
          {"history_s", ctx.history_window},
          {"horizon_s", ctx.prediction_horizon},
          {"future", PointsToJson(scene.future.points)}};
}

Scene SceneFromJson(const json& j) {
  Scene scene;
  try {
    scene.scene_id = j.at("scene_id").get<std::string>();
    SceneContext& ctx = scene.context;
    ctx.freq = j.at("freq_hz").get<double>();
    ctx.target_id = j.at("target_id").get<std::string>();
    ctx.t_now = j.at("t_now").get<double>();
    ctx.history_window = j.at("history_s").get<double>();
    ctx.prediction_horizon = j.at("horizon_s").get<double>();

    const json& map = j.at("map");
    const json& drivable = map.at("drivable");
    const json* holes = map.contains("drivable_holes") ? &map["drivable_holes"] : nullptr;
    if (holes != nullptr && holes->size() != drivable.size()) {
      throw DataError("drivable_holes must match drivable in length");
    }
    for (std::size_t i = 0; i < drivable.size(); ++i) {
      std::vector<Ring> hole_rings;
      if (holes != nullptr) {
        for (const json& h : (*holes)[i]) hole_rings.push_back(PointsFromJson(h));
      }
      ctx.map.drivable.polygons.push_back(
          MakePolygon(PointsFromJson(drivable[i]), std::move(hole_rings)));
    }
    ValidatePolygonSet(ctx.map.drivable);
    for (const json& lane : map.at("lanes")) {
      ctx.map.lanes.push_back(PointsFromJson(lane));
    }

    for (const json& a : j.at("agents")) {
      Agent agent;
      agent.id = a.at("id").get<std::string>();
      agent.type = ParseAgentType(a.at("type").get<std::string>());
      for (const json& s : a.at("states")) {
        AgentState state;
        state.t = s.at("t").get<double>();
        state.pose = Pose2::Make(s.at("x").get<double>(), s.at("y").get<double>(),
                                 s.at("yaw").get<double>());
        state.speed = s.value("speed", 0.0);
        state.accel = s.value("accel", 0.0);
        state.yaw_rate = s.value("yaw_rate", 0.0);
        state.length = s.value("length", 0.0);
        state.width = s.value("width", 0.0);
        agent.states.push_back(state);
      }
      ctx.agents.push_back(std::move(agent));
    }
    ValidateSceneContext(ctx);

    scene.future.points = PointsFromJson(j.at("future"));
    scene.future.dt = 1.0 / ctx.freq;
    scene.future.frame = Frame::kGlobal;
  } catch (const json::exception& e) {
    throw DataError("malformed scene: " + std::string(e.what()));
  } catch (const ContractViolation& e) {
    throw DataError("invalid scene: " + std::string(e.what()));
  }
  return scene;
}

std::string SceneToText(const Scene& scene) {
  return SceneToJson(scene).dump(1) + "\n";
}

void SaveScene(const std::filesystem::path& path, const Scene& scene) {
  WriteTextFile(path, SceneToText(scene));
}

Scene LoadScene(const std::filesystem::path& path) {
  return SceneFromJson(ReadJsonFile(path));
}

void SaveScenes(const std::filesystem::path& dir, const std::vector<Scene>& scenes) {
  std::filesystem::create_directories(dir);
  ParallelFor(scenes.size(), [&](std::size_t i) {
    SaveScene(dir / (scenes[i].scene_id + ".json"), scenes[i]);
  });
}

std::vector<Scene> LoadScenes(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw DataError("not a scene directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<Scene> scenes(files.size());
  ParallelFor(files.size(), [&](std::size_t i) { scenes[i] = LoadScene(files[i]); });
  return scenes;
}

}  // namespace trajcover
