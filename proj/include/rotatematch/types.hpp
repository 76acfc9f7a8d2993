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

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rotatematch {

// Clockwise rotation applied to an image before detection.
enum class Orientation : std::uint8_t { kR0 = 0, kR90 = 1, kR180 = 2, kR270 = 3 };

inline constexpr std::array<Orientation, 4> kAllOrientations = {
    Orientation::kR0, Orientation::kR90, Orientation::kR180, Orientation::kR270};

constexpr int Index(Orientation o) { return static_cast<int>(o); }
constexpr int Degrees(Orientation o) { return 90 * Index(o); }

// Group composition in Z/4: applying `a` then `b`.
constexpr Orientation Compose(Orientation a, Orientation b) {
  return static_cast<Orientation>((Index(a) + Index(b)) % 4);
}
constexpr Orientation Inverse(Orientation o) {
  return static_cast<Orientation>((4 - Index(o)) % 4);
}

// Throws Error(kInvalidValue) unless degrees is one of 0, 90, 180, 270.
Orientation OrientationFromDegrees(int degrees);

// Single-channel 8-bit image, row-major.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  GrayImage() = default;
  GrayImage(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

  std::uint8_t at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  std::uint8_t& at(int x, int y) {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  bool empty() const { return width <= 0 || height <= 0; }
};

struct ImageRecord {
  std::string id;
  std::filesystem::path path;
  // Filled by LoadPixels(); empty until then.
  GrayImage image;

  bool loaded() const { return !image.pixels.empty(); }
  int width() const { return image.width; }
  int height() const { return image.height; }
};

struct DatasetManifest {
  std::string dataset_id;
  // Order defines row order in descriptor and feature files.
  std::vector<ImageRecord> images;

  std::vector<std::string> ids() const;
};

struct GlobalDescriptor {
  std::string image_id;
  std::vector<double> vector;  // unit L2 norm
};

struct Keypoint {
  // Original (unrotated) frame, pixel centres at integer coordinates.
  double x = 0.0;
  double y = 0.0;
  double score = 0.0;
  Orientation source_orientation = Orientation::kR0;
};

struct FeatureSet {
  std::string image_id;
  std::vector<Keypoint> keypoints;
  // keypoints.size() rows of descriptor_dim floats, each row unit L2 norm.
  std::vector<float> descriptors;
  int descriptor_dim = 0;

  std::size_t size() const { return keypoints.size(); }
  const float* row(std::size_t i) const {
    return descriptors.data() + i * static_cast<std::size_t>(descriptor_dim);
  }
};

// Unordered image pair stored canonically with a < b.
struct CandidatePair {
  std::string a;
  std::string b;
  double distance = 0.0;
  bool scored = false;

  // Canonicalizes the order of p and q. Throws Error(kInvalidValue) on p == q.
  static CandidatePair Make(std::string p, std::string q, double distance = 0.0,
                            bool scored = false);

  friend bool operator==(const CandidatePair&, const CandidatePair&) = default;
};

struct Correspondence {
  std::uint32_t index_a = 0;
  std::uint32_t index_b = 0;
  double xa = 0.0, ya = 0.0, xb = 0.0, yb = 0.0;

  friend bool operator==(const Correspondence&, const Correspondence&) = default;
};

using OrientationCounts = std::array<int, 4>;  // indexed by Index(Orientation)

struct PairMatchResult {
  CandidatePair pair;
  OrientationCounts stage1_counts{};
  OrientationCounts stage2_counts{};
  int total = 0;
  bool kept = false;
  std::vector<Correspondence> correspondences;
};

struct Clustering {
  std::vector<std::vector<std::string>> clusters;  // each sorted
  std::vector<std::string> outliers;               // sorted

  // All ids, clusters first then outliers.
  std::vector<std::string> universe() const;
};

struct EvalReport {
  std::string dataset_id;
  double maa = 0.0;
  double cl = 0.0;
  double score = 0.0;
  std::vector<double> per_cluster_accuracy;
  std::vector<std::optional<std::size_t>> alignment;  // GT index -> pred index
};

enum class Backend { kBuiltin, kExternal };

struct PipelineConfig {
  int exhaustive_threshold = 20;
  int min_pairs = 20;
  std::optional<double> distance_threshold;  // nullopt = "auto", floor only
  int match_gate = 25;
  std::vector<Orientation> rotations{kAllOrientations.begin(),
                                     kAllOrientations.end()};
  int max_keypoints_per_orientation = 512;
  double ratio_test = 0.3;
  Backend backend = Backend::kBuiltin;
  // Inputs for the external backend (adapter output).
  std::filesystem::path global_descriptors;
  std::filesystem::path local_features;

  // Empty when the invariants hold.
  std::vector<std::string> Violations() const;
  // Throws Error(kConfig) listing every violation.
  void Validate() const;
};

}  // namespace rotatematch
