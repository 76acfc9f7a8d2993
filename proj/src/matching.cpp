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

#include "rotatematch/matching.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "rotatematch/error.hpp"

namespace rotatematch {
namespace {

// Squared distance d(query, target) read from a row-major |A| x |B| matrix,
// either directly (queries in A) or transposed (queries in B).
struct DistanceTable {
  const float* data;
  std::size_t cols;
  bool transposed;

};

// `queries` and `targets` hold ascending indices, so "lowest index" ties are
// resolved by scanning in order with strict comparisons.
std::vector<IndexPair> MutualMatch(const DistanceTable& d,
                                   std::span<const std::uint32_t> queries,
                                   std::span<const std::uint32_t> targets, double ratio) {
  std::vector<IndexPair> out;
  if (queries.empty() || targets.empty()) return out;

  constexpr float kInf = std::numeric_limits<float>::infinity();
  std::vector<float> target_best(targets.size(), kInf);
  std::vector<std::uint32_t> target_arg(targets.size(), 0);
  std::vector<float> best1(queries.size(), kInf);
  std::vector<float> best2(queries.size(), kInf);
  std::vector<std::size_t> arg1(queries.size(), 0);

  // Every query sees targets in ascending order and every target sees
  // queries in ascending order under either loop nesting, so the nesting is
  // picked to walk the matrix row by row.
  auto visit = [&](std::size_t qi, std::size_t ti, float v) {
    if (v < best1[qi]) {
      best2[qi] = best1[qi];
      best1[qi] = v;
      arg1[qi] = ti;
    } else if (v < best2[qi]) {
      best2[qi] = v;
    }
    if (v < target_best[ti]) {
      target_best[ti] = v;
      target_arg[ti] = queries[qi];
    }
  };
  if (!d.transposed) {
    for (std::size_t qi = 0; qi < queries.size(); ++qi) {
      const float* row = d.data + static_cast<std::size_t>(queries[qi]) * d.cols;
      for (std::size_t ti = 0; ti < targets.size(); ++ti) visit(qi, ti, row[targets[ti]]);
    }
  } else {
    for (std::size_t ti = 0; ti < targets.size(); ++ti) {
      const float* row = d.data + static_cast<std::size_t>(targets[ti]) * d.cols;
      for (std::size_t qi = 0; qi < queries.size(); ++qi) visit(qi, ti, row[queries[qi]]);
    }
  }

  for (std::size_t qi = 0; qi < queries.size(); ++qi) {
    const std::size_t ti = arg1[qi];
    if (target_arg[ti] != queries[qi]) continue;
    if (targets.size() > 1) {
      const double nearest = std::sqrt(static_cast<double>(best1[qi]));
      const double second = std::sqrt(static_cast<double>(best2[qi]));
      if (!(nearest <= ratio * second)) continue;
    }
    out.emplace_back(queries[qi], targets[ti]);
  }
  return out;
}

std::vector<std::uint32_t> Iota(std::size_t n) {
  std::vector<std::uint32_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<std::uint32_t>(i);
  return out;
}

std::vector<std::uint32_t> WithOrientation(const FeatureSet& set, Orientation o) {
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < set.keypoints.size(); ++i) {
    if (set.keypoints[i].source_orientation == o) out.push_back(static_cast<std::uint32_t>(i));
  }
  return out;
}

kernels::MatrixView View(const FeatureSet& set) {
  return {set.descriptors.data(), set.keypoints.size(),
          static_cast<std::size_t>(set.descriptor_dim)};
}

void CheckCompatible(const FeatureSet& fa, const FeatureSet& fb) {
  const bool empty = fa.keypoints.empty() || fb.keypoints.empty();
  if (!empty && fa.descriptor_dim != fb.descriptor_dim) {
    throw Error(ErrorCode::kDimensionMismatch,
                fa.image_id + " has descriptor dim " + std::to_string(fa.descriptor_dim) +
                    ", " + fb.image_id + " has " + std::to_string(fb.descriptor_dim));
  }
}

}  // namespace

std::vector<IndexPair> MutualNnMatch(kernels::MatrixView a, kernels::MatrixView b,
                                     double ratio) {
  if (a.rows == 0 || b.rows == 0) return {};
  std::vector<float> dist(a.rows * b.rows);
  kernels::omp::SquaredDistances(a, b, dist);
  const DistanceTable table{dist.data(), b.rows, false};
  return MutualMatch(table, Iota(a.rows), Iota(b.rows), ratio);
}

PairMatchResult MatchPairTwoStage(const FeatureSet& fa, const FeatureSet& fb,
                                  const PipelineConfig& config) {
  CheckCompatible(fa, fb);
  PairMatchResult result;
  result.pair = CandidatePair::Make(fa.image_id, fb.image_id);

  const std::size_t na = fa.keypoints.size();
  const std::size_t nb = fb.keypoints.size();
  std::vector<IndexPair> found;  // (index in A, index in B)
  if (na > 0 && nb > 0) {
    std::vector<float> dist(na * nb);
    kernels::omp::SquaredDistances(View(fa), View(fb), dist);
    const DistanceTable a_to_b{dist.data(), nb, false};
    const DistanceTable b_to_a{dist.data(), nb, true};
    const auto all_a = Iota(na);
    const auto all_b = Iota(nb);

    for (Orientation o : config.rotations) {
      const auto matches = MutualMatch(a_to_b, all_a, WithOrientation(fb, o), config.ratio_test);
      result.stage1_counts[Index(o)] = static_cast<int>(matches.size());
      found.insert(found.end(), matches.begin(), matches.end());
    }
    for (Orientation o : config.rotations) {
      const auto matches = MutualMatch(b_to_a, all_b, WithOrientation(fa, o), config.ratio_test);
      result.stage2_counts[Index(o)] = static_cast<int>(matches.size());
      for (const auto& [ib, ia] : matches) found.emplace_back(ia, ib);
    }
  }
  result.total = SumCounts(result.stage1_counts) + SumCounts(result.stage2_counts);
  result.kept = result.total >= config.match_gate;

  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  // Correspondences follow the canonical pair (a < b); stage counts keep the
  // argument roles.
  const bool swapped = result.pair.a != fa.image_id;
  result.correspondences.reserve(found.size());
  for (const auto& [ia, ib] : found) {
    const auto& ka = fa.keypoints[ia];
    const auto& kb = fb.keypoints[ib];
    if (!swapped) {
      result.correspondences.push_back({ia, ib, ka.x, ka.y, kb.x, kb.y});
    } else {
      result.correspondences.push_back({ib, ia, kb.x, kb.y, ka.x, ka.y});
    }
  }
  if (swapped) {
    std::sort(result.correspondences.begin(), result.correspondences.end(),
              [](const Correspondence& l, const Correspondence& r) {
                return std::tie(l.index_a, l.index_b) < std::tie(r.index_a, r.index_b);
              });
  }
  return result;
}

std::vector<PairMatchResult> MatchAll(std::span<const CandidatePair> pairs,
                                      const std::map<std::string, FeatureSet>& features,
                                      const PipelineConfig& config) {
  std::vector<std::pair<const FeatureSet*, const FeatureSet*>> inputs;
  inputs.reserve(pairs.size());
  for (const auto& pair : pairs) {
    auto a = features.find(pair.a);
    if (a == features.end()) throw Error(ErrorCode::kMissingFeatures, pair.a);
    auto b = features.find(pair.b);
    if (b == features.end()) throw Error(ErrorCode::kMissingFeatures, pair.b);
    CheckCompatible(a->second, b->second);
    inputs.emplace_back(&a->second, &b->second);
  }

  std::vector<PairMatchResult> results(pairs.size());
  std::vector<std::exception_ptr> errors(pairs.size());
  const auto n = static_cast<std::ptrdiff_t>(pairs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      results[i] = MatchPairTwoStage(*inputs[i].first, *inputs[i].second, config);
      results[i].pair = pairs[i];
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace rotatematch
