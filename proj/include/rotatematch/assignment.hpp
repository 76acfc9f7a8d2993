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
#include <cstdint>
#include <optional>
#include <vector>

namespace rotatematch {

// Dense rows x cols matrix of non-negative integer weights.
struct WeightMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::int64_t> data;

  WeightMatrix() = default;
  WeightMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}
  std::int64_t& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  std::int64_t operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

struct Assignment {
  std::int64_t total = 0;
  // Row -> column, or nullopt when the row is unassigned or only reachable
  // through zero-weight cells.
  std::vector<std::optional<std::size_t>> row_to_col;
};

// Maximum-weight injective partial assignment (Hungarian algorithm on the
// zero-padded square matrix).
Assignment MaxWeightAssignment(const WeightMatrix& weights);

// Same optimum, but among all maximum-weight assignments returns the
// lexicographically smallest row_to_col sequence, with "unassigned" ordered
// after every column index.
Assignment LexMinMaxWeightAssignment(const WeightMatrix& weights);

}  // namespace rotatematch
