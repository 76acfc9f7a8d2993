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
#include <optional>
#include <string>
#include <vector>

#include "rotatematch/types.hpp"

namespace rotatematch {

using ClusterAlignment = std::vector<std::optional<std::size_t>>;

// Injective GT -> predicted cluster map maximizing the summed intersection
// sizes. GT clusters without a positive intersection stay unaligned; ties are
// broken toward the lexicographically smallest map.
ClusterAlignment AlignClusters(const Clustering& gt, const Clustering& pred);

// Sum over aligned GT clusters of |S_i ∩ C_σ(i)|.
std::size_t AlignedIntersection(const Clustering& gt, const Clustering& pred,
                                const ClusterAlignment& alignment);

struct MaaResult {
  double maa = 0.0;
  std::vector<double> per_cluster_accuracy;
};

// Mean over GT clusters of |S_i ∩ C_σ(i)| / |S_i|; unaligned clusters score 0.
MaaResult ComputeMaa(const Clustering& gt, const Clustering& pred,
                     const ClusterAlignment& alignment);

// Σ|S_i ∩ C_σ(i)| / Σ|C_σ(i)| over aligned clusters only; 0 if none aligned.
double ComputeCl(const Clustering& gt, const Clustering& pred,
                 const ClusterAlignment& alignment);

// Harmonic mean, 0 when both inputs are 0.
double FinalScore(double maa, double cl);

EvalReport Evaluate(const Clustering& gt, const Clustering& pred,
                    std::string dataset_id = {});

struct DatasetEvalInput {
  std::string dataset_id;
  Clustering gt;
  Clustering pred;
};

struct AggregateReport {
  std::vector<EvalReport> datasets;
  // Unweighted means of the per-dataset values.
  double maa = 0.0;
  double cl = 0.0;
  double score = 0.0;
};

// Throws kEmptyInput when given no datasets.
AggregateReport EvaluateDatasets(const std::vector<DatasetEvalInput>& inputs);

struct UniverseDiff {
  std::vector<std::string> only_gt;
  std::vector<std::string> only_pred;
  bool empty() const { return only_gt.empty() && only_pred.empty(); }
};

UniverseDiff CompareUniverses(const Clustering& gt, const Clustering& pred);

// Empty when clusters and outliers are pairwise disjoint.
std::vector<std::string> ClusteringViolations(const Clustering& clustering);

}  // namespace rotatematch
