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
#include <optional>
#include <string>
#include <vector>

#include "rotatematch/types.hpp"

namespace rotatematch {

struct SynthConfig {
  std::uint64_t seed = 0;
  int scenes = 3;
  int views_per_scene = 8;
  int outliers = 4;
  int base_size = 256;
  double crop_fraction = 0.85;
  int brightness_jitter = 10;

  std::vector<std::string> Violations() const;
};

// Ground-truth record of how one view was produced.
struct SynthView {
  std::string id;
  std::optional<int> scene;  // nullopt for outliers
  int crop_x = 0;
  int crop_y = 0;
  int crop_side = 0;
  Orientation orientation = Orientation::kR0;
  int brightness = 0;
};

struct SynthDataset {
  DatasetManifest manifest;  // pixels loaded
  Clustering ground_truth;
  std::vector<SynthView> views;
};

// Seeded textures: value-noise octaves plus 6-12 high-contrast rectangles
// and discs. Deterministic for a given config.
GrayImage SceneTexture(std::uint64_t seed, int size);

// In-memory generation; image paths point into out_dir/images.
SynthDataset RenderDataset(const SynthConfig& config, const std::filesystem::path& out_dir);

// RenderDataset plus images/*.png, manifest.json and gt.json under out_dir.
// Throws kIo when out_dir is not writable, kConfig on invalid config.
SynthDataset GenerateDataset(const SynthConfig& config, const std::filesystem::path& out_dir);

}  // namespace rotatematch
