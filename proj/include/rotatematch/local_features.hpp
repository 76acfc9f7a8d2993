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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "rotatematch/types.hpp"

namespace rotatematch {

struct RotatedView {
  Orientation orientation = Orientation::kR0;
  GrayImage image;  // (W,H) for R0/R180, (H,W) for R90/R270
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

struct ImageSize {
  int width = 0;
  int height = 0;
};

// Exact pixel permutation. Under R90 the original pixel (x, y) lands at
// (H-1-y, x); under R180 at (W-1-x, H-1-y); under R270 at (y, W-1-x).
RotatedView RotateImage(const GrayImage& image, Orientation orientation);

// Same map applied to real coordinates; width/height are the ORIGINAL dims.
Point2 RotatePoint(Point2 original, Orientation orientation, int width, int height);

// Inverse of RotatePoint. The rotated point must lie inside the pixel-centre
// hull [0, W'-1] x [0, H'-1] of the rotated frame, else kOutOfBounds.
Point2 UnrotatePoint(Point2 rotated, Orientation orientation, int width, int height);

ImageSize RotatedSize(ImageSize original, Orientation orientation);

inline constexpr int kLocalDescriptorDim = 64;
inline constexpr int kPatchSide = 8;
inline constexpr int kPatchStride = 2;
inline constexpr int kBorderMargin = 8;
inline constexpr int kMinDetectSide = 16;
inline constexpr double kResponseFloor = 1e-6;

struct DetectedKeypoint {
  double x = 0.0;  // rotated-view frame
  double y = 0.0;
  double score = 0.0;
};

struct Detection {
  std::vector<DetectedKeypoint> keypoints;
  std::vector<float> descriptors;  // keypoints.size() x kLocalDescriptorDim
};

// Harris corners with 3x3 non-maximum suppression. Keypoints closer than
// kBorderMargin to an edge are discarded, the rest ranked by score (ties in
// scan order) and truncated to max_keypoints. Each gets an 8x8 stride-2
// bilinear intensity patch, mean-centred and L2-normalized.
Detection BuiltinDetect(const GrayImage& view, int max_keypoints);

// Bilinear intensity with edge clamping.
double SampleBilinear(const GrayImage& image, double x, double y);

// Runs detection on each configured rotation and maps every keypoint back to
// the original frame. Orientations are concatenated without deduplication.
FeatureSet ExtractFeatures(std::string id, const GrayImage& image,
                           const PipelineConfig& config);

// Per-image extraction over the whole manifest, in manifest order.
std::vector<FeatureSet> ExtractAll(const DatasetManifest& manifest,
                                   const PipelineConfig& config);

// RMKP: "RMKP", u32 version 1, u32 image_count, u32 descriptor_dim, then per
// image: u16 len + id, u32 keypoint_count, keypoint_count x (f32 x, f32 y,
// f32 score, u16 degrees), keypoint_count x descriptor_dim f32.
void WriteRmkp(const std::filesystem::path& path, std::span<const FeatureSet> features);

// Coordinates must already be in the original frame and inside `sizes`.
// Throws kBadMagic, kVersionUnsupported, kTruncatedFile, kCoordOutOfBounds,
// kNonFiniteValue, kUnknownId, kInvalidValue.
std::vector<FeatureSet> LoadExternalFeatures(const std::filesystem::path& path,
                                             const std::map<std::string, ImageSize>& sizes);

// Reads without bounds checks (sizes unknown).
std::vector<FeatureSet> ReadRmkp(const std::filesystem::path& path);

std::map<std::string, ImageSize> ImageSizes(const DatasetManifest& manifest);

}  // namespace rotatematch
