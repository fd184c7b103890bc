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

#ifndef TRAJCOVER_SCENE_IO_H_
#define TRAJCOVER_SCENE_IO_H_

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "trajcover/scene.h"

namespace trajcover {

// One scene per JSON file:
//   {scene_id, freq_hz, map: {drivable: [ring...], lanes: [polyline...]},
//    agents: [{id, type, states: [{t, x, y, yaw, speed, accel, yaw_rate,
//    length, width}]}], target_id, t_now, history_s, horizon_s, future}
// Rings and polylines are arrays of [x, y]. Polygons with holes add
// "drivable_holes": one array of rings per entry of "drivable".
nlohmann::json SceneToJson(const Scene& scene);
// Throws DataError on malformed input.
Scene SceneFromJson(const nlohmann::json& j);

std::string SceneToText(const Scene& scene);
void SaveScene(const std::filesystem::path& path, const Scene& scene);
Scene LoadScene(const std::filesystem::path& path);

// Writes <dir>/<scene_id>.json for every scene.
void SaveScenes(const std::filesystem::path& dir, const std::vector<Scene>& scenes);
// Every *.json file in `dir`, ordered by file name.
std::vector<Scene> LoadScenes(const std::filesystem::path& dir);

}  // namespace trajcover

#endif  // TRAJCOVER_SCENE_IO_H_
