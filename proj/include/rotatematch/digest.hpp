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
#include <span>
#include <string>
#include <string_view>

namespace rotatematch {

// Hex SHA-256 of a byte string.
std::string Sha256Hex(std::string_view bytes);

// Hex SHA-256 of a file's contents. Throws kIo.
std::string FileDigest(const std::filesystem::path& path);

std::string Base64(std::span<const std::uint8_t> bytes);

}  // namespace rotatematch
