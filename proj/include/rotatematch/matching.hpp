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
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rotatematch/kernels.hpp"
#include "rotatematch/types.hpp"

namespace rotatematch {

using IndexPair = std::pair<std::uint32_t, std::uint32_t>;

// Mutual nearest neighbours by Euclidean distance. A query row is kept when
// its nearest target is within `ratio` times the second nearest (skipped when
// b has a single row) and that target's nearest query is the row itself.
// Ties go to the lowest index. Result sorted by index in a.
std::vector<IndexPair> MutualNnMatch(kernels::MatrixView a, kernels::MatrixView b,
                                     double ratio);

// Stage 1 matches all of A against each orientation subset of B, stage 2 all
// of B against each orientation subset of A. The gate compares the summed
// counts of both stages; the correspondence list is the deduplicated union.
PairMatchResult MatchPairTwoStage(const FeatureSet& fa, const FeatureSet& fb,
                                  const PipelineConfig& config);

// One result per pair, in input order; pairs are matched concurrently.
// Throws kMissingFeatures naming the first id without features.
std::vector<PairMatchResult> MatchAll(std::span<const CandidatePair> pairs,
                                      const std::map<std::string, FeatureSet>& features,
                                      const PipelineConfig& config);

inline int SumCounts(const OrientationCounts& counts) {
  return counts[0] + counts[1] + counts[2] + counts[3];
}

}  // namespace rotatematch
