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

#ifndef TRAJCOVER_JSON_UTIL_H_
#define TRAJCOVER_JSON_UTIL_H_

#include <filesystem>
#include <string>

#include "json.hpp"

namespace trajcover {

// 17 significant digits; round-trips every finite double.
std::string FormatDouble(double value);

nlohmann::json ReadJsonFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, const std::string& text);
std::string ReadTextFile(const std::filesystem::path& path);

}  // namespace trajcover

#endif  // TRAJCOVER_JSON_UTIL_H_
