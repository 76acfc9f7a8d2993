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

#include "rotatematch/types.hpp"

#include <algorithm>
#include <cmath>

#include "rotatematch/error.hpp"

namespace rotatematch {

Orientation OrientationFromDegrees(int degrees) {
  switch (degrees) {
    case 0: return Orientation::kR0;
    case 90: return Orientation::kR90;
    case 180: return Orientation::kR180;
    case 270: return Orientation::kR270;
    default:
      throw Error(ErrorCode::kInvalidValue,
                  "orientation must be 0, 90, 180 or 270, got " +
                      std::to_string(degrees));
  }
}

std::vector<std::string> DatasetManifest::ids() const {
  std::vector<std::string> out;
  out.reserve(images.size());
  for (const auto& image : images) out.push_back(image.id);
  return out;
}

CandidatePair CandidatePair::Make(std::string p, std::string q, double distance,
                                  bool scored) {
  if (p == q) throw Error(ErrorCode::kInvalidValue, "self-pair on id " + p);
  if (q < p) std::swap(p, q);
  return CandidatePair{std::move(p), std::move(q), distance, scored};
}

std::vector<std::string> Clustering::universe() const {
  std::vector<std::string> out;
  for (const auto& cluster : clusters) {
    out.insert(out.end(), cluster.begin(), cluster.end());
  }
  out.insert(out.end(), outliers.begin(), outliers.end());
  return out;
}

std::vector<std::string> PipelineConfig::Violations() const {
  std::vector<std::string> out;
  if (exhaustive_threshold < 2) out.push_back("exhaustive_threshold must be >= 2");
  if (min_pairs < 1) out.push_back("min_pairs must be >= 1");
  if (match_gate < 1) out.push_back("match_gate must be >= 1");
  if (max_keypoints_per_orientation < 1) {
    out.push_back("max_keypoints_per_orientation must be >= 1");
  }
  if (!(ratio_test > 0.0 && ratio_test <= 1.0)) {
    out.push_back("ratio_test must lie in (0, 1]");
  }
  if (distance_threshold &&
      (!std::isfinite(*distance_threshold) || *distance_threshold < 0.0)) {
    out.push_back("distance_threshold must be a finite number >= 0 or auto");
  }
  if (std::find(rotations.begin(), rotations.end(), Orientation::kR0) ==
      rotations.end()) {
    out.push_back("rotations must include 0");
  }
  for (std::size_t i = 1; i < rotations.size(); ++i) {
    if (Index(rotations[i - 1]) >= Index(rotations[i])) {
      out.push_back("rotations must be strictly increasing");
      break;
    }
  }
  if (backend == Backend::kExternal &&
      (global_descriptors.empty() || local_features.empty())) {
    out.push_back("external backend needs global_descriptors and local_features");
  }
  return out;
}

void PipelineConfig::Validate() const {
  const auto violations = Violations();
  if (violations.empty()) return;
  std::string message;
  for (const auto& v : violations) {
    if (!message.empty()) message += "; ";
    message += v;
  }
  throw Error(ErrorCode::kConfig, message);
}

}  // namespace rotatematch
