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

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "rotatematch/types.hpp"

namespace rotatematch {

// All C(N,2) canonical pairs, unscored, sorted by (a, b).
std::vector<CandidatePair> ExhaustivePairs(std::span<const std::string> ids);

// Global ranking of all pairs by Euclidean descriptor distance. Pairs within
// config.distance_threshold are kept; the list is then topped up with the
// nearest remaining pairs until it holds min(min_pairs, C(N,2)) entries.
// Sorted ascending by distance, ties by (a, b). Throws kDimensionMismatch.
std::vector<CandidatePair> RetrievalPairs(std::span<const GlobalDescriptor> descriptors,
                                          const PipelineConfig& config);

using DescriptorProvider =
    std::function<std::vector<GlobalDescriptor>(const DatasetManifest&)>;

// Exhaustive below config.exhaustive_threshold images, retrieval at or above
// it. The provider is only called on the retrieval path.
std::vector<CandidatePair> AdaptivePairs(const DatasetManifest& manifest,
                                         const DescriptorProvider& provider,
                                         const PipelineConfig& config);

constexpr std::size_t PairCount(std::size_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

}  // namespace rotatematch
