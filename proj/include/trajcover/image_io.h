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

#ifndef TRAJCOVER_IMAGE_IO_H_
#define TRAJCOVER_IMAGE_IO_H_

#include <filesystem>

#include "trajcover/raster.h"

namespace trajcover {

// Binary PPM (P6), maxval 255.
void WritePpm(const RasterImage& image, const std::filesystem::path& path);
RasterImage ReadPpm(const std::filesystem::path& path);

// 8-bit RGB PNG, no interlacing.
void WritePng(const RasterImage& image, const std::filesystem::path& path);

}  // namespace trajcover

#endif  // TRAJCOVER_IMAGE_IO_H_
