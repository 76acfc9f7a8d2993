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

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "rotatematch/types.hpp"

namespace rotatematch {

// Rec.601 integer luma, rounded to nearest.
constexpr std::uint8_t Luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  return static_cast<std::uint8_t>((299 * r + 587 * g + 114 * b + 500) / 1000);
}

// Decodes a PNG file to grayscale. Colour inputs go through Luma().
GrayImage ReadPng(const std::filesystem::path& path);

void WritePng(const std::filesystem::path& path, const GrayImage& image);

std::vector<std::uint8_t> EncodePng(const GrayImage& image);

}  // namespace rotatematch
