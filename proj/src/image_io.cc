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

#include "trajcover/image_io.h"

#include <png.h>

#include <cstdio>
#include <fstream>
#include <memory>
#include <string>

#include "trajcover/contract.h"

namespace trajcover {

void WritePpm(const RasterImage& image, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << "P6\n" << image.width() << " " << image.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels().data()),
            static_cast<std::streamsize>(image.pixels().size()));
  if (!out) throw DataError("write failed: " + path.string());
}

RasterImage ReadPpm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::string magic;
  int width = 0, height = 0, maxval = 0;
  in >> magic >> width >> height >> maxval;
  in.get();
  if (magic != "P6" || maxval != 255 || width <= 0 || height <= 0) {
    throw DataError(path.string() + ": not an 8-bit P6 image");
  }
  // Geometry metadata is not stored in PPM; defaults describe the image.
  RasterImage image(height, width, 0.25, height * 4 / 5, width / 2);
  std::vector<char> buf(static_cast<std::size_t>(width) * height * 3);
  in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!in) throw DataError(path.string() + ": truncated pixel data");
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const std::size_t i = (static_cast<std::size_t>(r) * width + c) * 3;
      image.set(r, c,
                {static_cast<std::uint8_t>(buf[i]),
                 static_cast<std::uint8_t>(buf[i + 1]),
                 static_cast<std::uint8_t>(buf[i + 2])});
    }
  }
  return image;
}

void WritePng(const RasterImage& image, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::unique_ptr<FILE, int (*)(FILE*)> file(std::fopen(path.c_str(), "wb"),
                                              &std::fclose);
  if (!file) throw DataError("cannot write " + path.string());
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (png == nullptr || info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    throw DataError("libpng initialisation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw DataError("PNG encoding failed: " + path.string());
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, image.width(), image.height(), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t stride = static_cast<std::size_t>(image.width()) * 3;
  for (int r = 0; r < image.height(); ++r) {
    png_write_row(png, const_cast<png_bytep>(image.pixels().data() + r * stride));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace trajcover
