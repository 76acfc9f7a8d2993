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
#include <vector>

#include "rotatematch/evaluation.hpp"
#include "rotatematch/types.hpp"

// Text artifacts exchanged between pipeline stages. Writers are
// deterministic: fixed key order, shortest round-trip number formatting.
namespace rotatematch {

// JSON Lines: {"a", "b", "distance", "scored"} per pair, in list order.
void WritePairs(const std::filesystem::path& path, std::span<const CandidatePair> pairs);
std::vector<CandidatePair> ReadPairs(const std::filesystem::path& path);

// JSON Lines: {"a", "b", "stage1": {"0": n, ...}, "stage2": {...}, "total",
// "kept", "correspondences": [[xa, ya, xb, yb], ...]}.
void WriteMatches(const std::filesystem::path& path,
                  std::span<const PairMatchResult> results);
// Keypoint indices are not serialized; read-back correspondences carry their
// position in the list as index_a and index_b.
std::vector<PairMatchResult> ReadMatches(const std::filesystem::path& path);

// {"clusters": [[ids...], ...], "outliers": [ids...]}, ids sorted per set.
void WriteClustering(const std::filesystem::path& path, const Clustering& clustering);
Clustering ReadClustering(const std::filesystem::path& path);

// {"datasets": [{"dataset_id", "maa", "cl", "score", "per_cluster_accuracy"}],
//  "aggregate": {"maa", "cl", "score"}}
void WriteMetrics(const std::filesystem::path& path, const AggregateReport& report);

void WriteTextFile(const std::filesystem::path& path, std::string_view text);

}  // namespace rotatematch
