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

#include "rotatematch/pairing.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "rotatematch/error.hpp"
#include "rotatematch/kernels.hpp"

namespace rotatematch {
namespace {

void RequireUnique(std::span<const std::string> ids) {
  std::set<std::string_view> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) throw Error(ErrorCode::kDuplicateId, id);
  }
}

bool ByCanonicalOrder(const CandidatePair& l, const CandidatePair& r) {
  return std::tie(l.a, l.b) < std::tie(r.a, r.b);
}

}  // namespace

std::vector<CandidatePair> ExhaustivePairs(std::span<const std::string> ids) {
  RequireUnique(ids);
  std::vector<CandidatePair> out;
  out.reserve(PairCount(ids.size()));
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = i + 1; j < ids.size(); ++j) {
      out.push_back(CandidatePair::Make(ids[i], ids[j]));
    }
  }
  std::sort(out.begin(), out.end(), ByCanonicalOrder);
  return out;
}

std::vector<CandidatePair> RetrievalPairs(std::span<const GlobalDescriptor> descriptors,
                                          const PipelineConfig& config) {
  const std::size_t n = descriptors.size();
  if (n < 2) return {};
  std::vector<std::string> ids;
  for (const auto& d : descriptors) ids.push_back(d.image_id);
  RequireUnique(ids);

  const auto distances = kernels::omp::PairwiseDistances(descriptors);
  std::vector<CandidatePair> ranked;
  ranked.reserve(distances.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      ranked.push_back(CandidatePair::Make(ids[i], ids[j],
                                           distances[kernels::CondensedIndex(n, i, j)],
                                           /*scored=*/true));
    }
  }
  std::sort(ranked.begin(), ranked.end(),
            [](const CandidatePair& l, const CandidatePair& r) {
              if (l.distance != r.distance) return l.distance < r.distance;
              return ByCanonicalOrder(l, r);
            });

  // After sorting, both the threshold set and the floor are prefixes.
  std::size_t within = 0;
  if (config.distance_threshold) {
    while (within < ranked.size() && ranked[within].distance <= *config.distance_threshold) {
      ++within;
    }
  }
  const std::size_t floor =
      std::min(static_cast<std::size_t>(std::max(config.min_pairs, 0)), ranked.size());
  ranked.resize(std::max(within, floor));
  return ranked;
}

std::vector<CandidatePair> AdaptivePairs(const DatasetManifest& manifest,
                                         const DescriptorProvider& provider,
                                         const PipelineConfig& config) {
  const auto ids = manifest.ids();
  if (ids.size() < static_cast<std::size_t>(config.exhaustive_threshold)) {
    return ExhaustivePairs(ids);
  }
  return RetrievalPairs(provider(manifest), config);
}

}  // namespace rotatematch
