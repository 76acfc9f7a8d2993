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

#include "rotatematch/evaluation.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "rotatematch/assignment.hpp"
#include "rotatematch/error.hpp"

namespace rotatematch {
namespace {

std::size_t IntersectionSize(const std::vector<std::string>& a,
                             const std::vector<std::string>& b) {
  // Inputs are sorted per the Clustering contract, but hand-written files may
  // not be; sort copies rather than trusting them.
  std::vector<std::string> sa(a), sb(b);
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  std::size_t n = 0;
  auto i = sa.begin();
  auto j = sb.begin();
  while (i != sa.end() && j != sb.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

}  // namespace

ClusterAlignment AlignClusters(const Clustering& gt, const Clustering& pred) {
  WeightMatrix weights(gt.clusters.size(), pred.clusters.size());
  for (std::size_t i = 0; i < gt.clusters.size(); ++i) {
    for (std::size_t j = 0; j < pred.clusters.size(); ++j) {
      weights(i, j) =
          static_cast<std::int64_t>(IntersectionSize(gt.clusters[i], pred.clusters[j]));
    }
  }
  return LexMinMaxWeightAssignment(weights).row_to_col;
}

std::size_t AlignedIntersection(const Clustering& gt, const Clustering& pred,
                                const ClusterAlignment& alignment) {
  std::size_t total = 0;
  for (std::size_t i = 0; i < gt.clusters.size(); ++i) {
    if (alignment[i]) total += IntersectionSize(gt.clusters[i], pred.clusters[*alignment[i]]);
  }
  return total;
}

MaaResult ComputeMaa(const Clustering& gt, const Clustering& pred,
                     const ClusterAlignment& alignment) {
  MaaResult out;
  if (gt.clusters.empty()) return out;
  double sum = 0.0;
  for (std::size_t i = 0; i < gt.clusters.size(); ++i) {
    double acc = 0.0;
    if (alignment[i] && !gt.clusters[i].empty()) {
      acc = static_cast<double>(IntersectionSize(gt.clusters[i], pred.clusters[*alignment[i]])) /
            static_cast<double>(gt.clusters[i].size());
    }
    out.per_cluster_accuracy.push_back(acc);
    sum += acc;
  }
  out.maa = sum / static_cast<double>(gt.clusters.size());
  return out;
}

double ComputeCl(const Clustering& gt, const Clustering& pred,
                 const ClusterAlignment& alignment) {
  std::size_t numerator = 0;
  std::size_t denominator = 0;
  for (std::size_t i = 0; i < gt.clusters.size(); ++i) {
    if (!alignment[i]) continue;
    const auto& c = pred.clusters[*alignment[i]];
    numerator += IntersectionSize(gt.clusters[i], c);
    denominator += c.size();
  }
  if (denominator == 0) return 0.0;
  return static_cast<double>(numerator) / static_cast<double>(denominator);
}

double FinalScore(double maa, double cl) {
  if (maa + cl == 0.0) return 0.0;
  return 2.0 * maa * cl / (maa + cl);
}

EvalReport Evaluate(const Clustering& gt, const Clustering& pred, std::string dataset_id) {
  EvalReport report;
  report.dataset_id = std::move(dataset_id);
  report.alignment = AlignClusters(gt, pred);
  auto maa = ComputeMaa(gt, pred, report.alignment);
  report.maa = maa.maa;
  report.per_cluster_accuracy = std::move(maa.per_cluster_accuracy);
  report.cl = ComputeCl(gt, pred, report.alignment);
  report.score = FinalScore(report.maa, report.cl);
  return report;
}

AggregateReport EvaluateDatasets(const std::vector<DatasetEvalInput>& inputs) {
  if (inputs.empty()) throw Error(ErrorCode::kEmptyInput, "no datasets to evaluate");
  AggregateReport out;
  for (const auto& input : inputs) {
    out.datasets.push_back(Evaluate(input.gt, input.pred, input.dataset_id));
    out.maa += out.datasets.back().maa;
    out.cl += out.datasets.back().cl;
    out.score += out.datasets.back().score;
  }
  const double n = static_cast<double>(inputs.size());
  out.maa /= n;
  out.cl /= n;
  out.score /= n;
  return out;
}

UniverseDiff CompareUniverses(const Clustering& gt, const Clustering& pred) {
  const auto g = gt.universe();
  const auto p = pred.universe();
  const std::set<std::string> gs(g.begin(), g.end());
  const std::set<std::string> ps(p.begin(), p.end());
  UniverseDiff diff;
  std::set_difference(gs.begin(), gs.end(), ps.begin(), ps.end(),
                      std::back_inserter(diff.only_gt));
  std::set_difference(ps.begin(), ps.end(), gs.begin(), gs.end(),
                      std::back_inserter(diff.only_pred));
  return diff;
}

std::vector<std::string> ClusteringViolations(const Clustering& clustering) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& id : clustering.universe()) {
    if (!seen.insert(id).second) out.push_back("id appears more than once: " + id);
  }
  for (std::size_t i = 0; i < clustering.clusters.size(); ++i) {
    if (clustering.clusters[i].empty()) out.push_back("empty cluster " + std::to_string(i));
  }
  return out;
}

}  // namespace rotatematch
