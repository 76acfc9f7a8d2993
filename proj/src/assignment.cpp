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

#include "rotatematch/assignment.hpp"

#include <algorithm>
#include <limits>

namespace rotatematch {
namespace {

// Minimum-cost perfect assignment on an n x n cost matrix (potentials form,
// O(n^3)). Returns the column assigned to each row.
std::vector<std::size_t> MinCostSquare(const std::vector<std::int64_t>& cost, std::size_t n) {
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0), minv(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      std::int64_t delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const std::int64_t cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n);
  for (std::size_t j = 1; j <= n; ++j) {
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

// Optimum over the given subset of rows and columns.
std::int64_t SubsetOptimum(const WeightMatrix& w, const std::vector<std::size_t>& rows,
                           const std::vector<std::size_t>& cols) {
  const std::size_t n = std::max(rows.size(), cols.size());
  if (rows.empty() || cols.empty()) return 0;
  std::vector<std::int64_t> cost(n * n, 0);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) cost[r * n + c] = -w(rows[r], cols[c]);
  }
  const auto assigned = MinCostSquare(cost, n);
  std::int64_t total = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (assigned[r] < cols.size()) total += w(rows[r], cols[assigned[r]]);
  }
  return total;
}

}  // namespace

Assignment MaxWeightAssignment(const WeightMatrix& weights) {
  Assignment out;
  out.row_to_col.assign(weights.rows, std::nullopt);
  const std::size_t n = std::max(weights.rows, weights.cols);
  if (weights.rows == 0 || weights.cols == 0) return out;
  std::vector<std::int64_t> cost(n * n, 0);
  for (std::size_t r = 0; r < weights.rows; ++r) {
    for (std::size_t c = 0; c < weights.cols; ++c) cost[r * n + c] = -weights(r, c);
  }
  const auto assigned = MinCostSquare(cost, n);
  for (std::size_t r = 0; r < weights.rows; ++r) {
    const std::size_t c = assigned[r];
    if (c < weights.cols && weights(r, c) > 0) {
      out.row_to_col[r] = c;
      out.total += weights(r, c);
    }
  }
  return out;
}

Assignment LexMinMaxWeightAssignment(const WeightMatrix& weights) {
  Assignment out;
  out.row_to_col.assign(weights.rows, std::nullopt);
  if (weights.rows == 0 || weights.cols == 0) return out;
  const std::int64_t best = MaxWeightAssignment(weights).total;

  // Fix rows one at a time to the smallest choice that still admits an
  // optimal completion of the remaining rows.
  std::vector<char> col_used(weights.cols, 0);
  std::int64_t fixed = 0;
  for (std::size_t r = 0; r < weights.rows; ++r) {
    std::vector<std::size_t> rest_rows;
    for (std::size_t rr = r + 1; rr < weights.rows; ++rr) rest_rows.push_back(rr);
    bool placed = false;
    for (std::size_t c = 0; c < weights.cols && !placed; ++c) {
      if (col_used[c] || weights(r, c) <= 0) continue;
      std::vector<std::size_t> rest_cols;
      for (std::size_t cc = 0; cc < weights.cols; ++cc) {
        if (!col_used[cc] && cc != c) rest_cols.push_back(cc);
      }
      if (fixed + weights(r, c) + SubsetOptimum(weights, rest_rows, rest_cols) == best) {
        out.row_to_col[r] = c;
        col_used[c] = 1;
        fixed += weights(r, c);
        placed = true;
      }
    }
  }
  out.total = fixed;
  return out;
}

}  // namespace rotatematch
