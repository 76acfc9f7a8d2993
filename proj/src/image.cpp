// Copyright 2026 The RotateMatch Authors
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

#include "rotatematch/image.hpp"

#include <png.h>

#include <cstring>
#include <fstream>

#include "rotatematch/error.hpp"

namespace rotatematch {
namespace {

struct PngImage {
  png_image image;
  PngImage() {
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
  }
  ~PngImage() { png_image_free(&image); }
  PngImage(const PngImage&) = delete;
  PngImage& operator=(const PngImage&) = delete;
};

}  // namespace

GrayImage ReadPng(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());

  PngImage png;
  if (!png_image_begin_read_from_memory(&png.image, bytes.data(), bytes.size())) {
    throw Error(ErrorCode::kIo, "cannot decode " + path.string() + ": " +
                                    png.image.message);
  }
  const bool color = (png.image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  png.image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(png.image));
  if (!png_image_finish_read(&png.image, nullptr, buffer.data(), 0, nullptr)) {
    throw Error(ErrorCode::kIo, "cannot decode " + path.string() + ": " +
                                    png.image.message);
  }

  GrayImage out(static_cast<int>(png.image.width),
                static_cast<int>(png.image.height));
  if (out.empty()) throw Error(ErrorCode::kZeroAreaImage, path.string());
  if (!color) {
    out.pixels = std::move(buffer);
  } else {
    for (std::size_t i = 0; i < out.pixels.size(); ++i) {
      out.pixels[i] = Luma(buffer[3 * i], buffer[3 * i + 1], buffer[3 * i + 2]);
    }
  }
  return out;
}

std::vector<std::uint8_t> EncodePng(const GrayImage& image) {
  PngImage png;
  png.image.width = static_cast<png_uint_32>(image.width);
  png.image.height = static_cast<png_uint_32>(image.height);
  png.image.format = PNG_FORMAT_GRAY;
  png_alloc_size_t size = 0;
  if (!png_image_write_get_memory_size(png.image, size, 0, image.pixels.data(),
                                       0, nullptr)) {
    throw Error(ErrorCode::kIo, std::string("png encode: ") + png.image.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&png.image, out.data(), &size, 0,
                                 image.pixels.data(), 0, nullptr)) {
    throw Error(ErrorCode::kIo, std::string("png encode: ") + png.image.message);
  }
  out.resize(size);
  return out;
}

void WritePng(const std::filesystem::path& path, const GrayImage& image) {
  const auto bytes = EncodePng(image);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

}  // namespace rotatematch
