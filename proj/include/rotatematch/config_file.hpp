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
#include <string_view>
#include <vector>

#include "rotatematch/types.hpp"

namespace rotatematch {

// Flat `key = value` text, one entry per line, `#` starts a comment. Keys
// mirror PipelineConfig fields. Relative paths resolve against the file's
// directory. Throws kIo (unreadable, message names the path) or kConfig.
PipelineConfig LoadConfigFile(const std::filesystem::path& path);

// Applies one key/value to `config`. Throws kConfig on unknown keys or bad
// values.
void ApplyConfigValue(PipelineConfig& config, std::string_view key, std::string_view value,
                      const std::filesystem::path& base_dir = {});

// "0,90,180,270" -> sorted unique orientations.
std::vector<Orientation> ParseRotations(std::string_view text);

// Canonical `key = value` rendering; LoadConfigFile(Render(c)) == c.
std::string RenderConfig(const PipelineConfig& config);

}  // namespace rotatematch
