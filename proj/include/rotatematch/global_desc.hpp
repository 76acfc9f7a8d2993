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
#include <span>
#include <string>
#include <vector>

#include "rotatematch/types.hpp"

namespace rotatematch {

inline constexpr int kThumbnailSide = 8;
inline constexpr int kBuiltinGlobalDim = kThumbnailSide * kThumbnailSide;
inline constexpr double kUnitNormTolerance = 1e-6;

// 8x8 area-averaged thumbnail in column-major cell order, mean-centred and
// L2-normalized. A constant image has no centred signal and maps to the
// constant vector 1/8.
// Throws Error(kZeroAreaImage) for an empty image.
GlobalDescriptor BuiltinGlobalDescriptor(std::string id, const GrayImage& image);

// One descriptor per manifest image, in manifest order. Loads pixels as needed.
std::vector<GlobalDescriptor> BuiltinGlobalDescriptors(const DatasetManifest& manifest);

// RMDF: "RMDF", u32 version 1, u32 count, u32 dim, count x (u16 len + id),
// count x dim f32 row-major. All little-endian.
void WriteRmdf(const std::filesystem::path& path,
               std::span<const GlobalDescriptor> descriptors);

// Rows whose norm is off by more than kUnitNormTolerance are re-normalized;
// others are kept bit-for-bit.
std::vector<GlobalDescriptor> LoadExternalDescriptors(const std::filesystem::path& path);

// Reorders descriptors into manifest order. Throws kUnknownId for a manifest
// image with no descriptor.
std::vector<GlobalDescriptor> AlignToManifest(std::vector<GlobalDescriptor> descriptors,
                                              const DatasetManifest& manifest);

}  // namespace rotatematch
