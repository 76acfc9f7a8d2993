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

#include "rotatematch/scene_graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "rotatematch/error.hpp"

namespace rotatematch {
namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t Find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void Union(std::size_t a, std::size_t b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

}  // namespace

Clustering BuildClusters(std::span<const std::string> all_ids,
                         std::span<const PairMatchResult> results) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < all_ids.size(); ++i) {
    if (!index.emplace(all_ids[i], i).second) {
      throw Error(ErrorCode::kDuplicateId, all_ids[i]);
    }
  }
  auto lookup = [&](const std::string& id) {
    auto it = index.find(id);
    if (it == index.end()) throw Error(ErrorCode::kUnknownId, id);
    return it->second;
  };

  DisjointSets sets(all_ids.size());
  for (const auto& result : results) {
    const std::size_t a = lookup(result.pair.a);
    const std::size_t b = lookup(result.pair.b);
    if (result.kept) sets.Union(a, b);
  }

  std::map<std::size_t, std::vector<std::string>> components;
  for (std::size_t i = 0; i < all_ids.size(); ++i) {
    components[sets.Find(i)].push_back(all_ids[i]);
  }

  Clustering out;
  for (auto& [root, members] : components) {
    std::sort(members.begin(), members.end());
    if (members.size() == 1) {
      out.outliers.push_back(std::move(members.front()));
    } else {
      out.clusters.push_back(std::move(members));
    }
  }
  std::sort(out.clusters.begin(), out.clusters.end(),
            [](const auto& l, const auto& r) {
              if (l.size() != r.size()) return l.size() > r.size();
              return l.front() < r.front();
            });
  std::sort(out.outliers.begin(), out.outliers.end());
  return out;
}

}  // namespace rotatematch
