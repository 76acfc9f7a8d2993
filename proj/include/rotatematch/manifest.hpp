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

#include <filesystem>
#include <string>
#include <vector>

#include "rotatematch/types.hpp"

namespace rotatematch {

// Parses {"dataset_id": ..., "images": [{"id", "path"}, ...]}. Relative image
// paths are resolved against the manifest's directory. Pixels are not loaded.
DatasetManifest LoadManifest(const std::filesystem::path& path);

// Writes image paths relative to the manifest's directory when possible.
void WriteManifest(const std::filesystem::path& path,
                   const DatasetManifest& manifest);

// Violations are data: "duplicate id: a", "missing file: <path>", ...
std::vector<std::string> ValidateManifest(const DatasetManifest& manifest);

void LoadPixels(ImageRecord& record);
void LoadAllPixels(DatasetManifest& manifest);

}  // namespace rotatematch
