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
#include <span>
#include <vector>

#include "rotatematch/types.hpp"

// Data-parallel inner loops. Every kernel exists twice: `serial` is the
// reference implementation and `omp` the OpenMP version. Both perform the
// same floating-point operations in the same order per output element, so
// their results are bit-identical; the tests check exactly that.
namespace rotatematch::kernels {

// Row-major matrix view: rows × dim floats.
struct MatrixView {
  const float* data = nullptr;
  std::size_t rows = 0;
  std::size_t dim = 0;

  const float* row(std::size_t i) const { return data + i * dim; }
};

inline constexpr double kHarrisK = 0.06;

namespace serial {

// out[i * b.rows + j] = sum_d (a[i][d] - b[j][d])^2, accumulated in d order.
void SquaredDistances(MatrixView a, MatrixView b, std::span<float> out);

// Condensed upper triangle, pair (i, j), i < j, in row-major order. Euclidean.
std::vector<double> PairwiseDistances(std::span<const GlobalDescriptor> descriptors);

// Harris response det(M) - k trace(M)^2 per pixel, M the 3x3 box-summed
// structure tensor of Sobel gradients. Borders replicate the edge pixel.
std::vector<double> HarrisResponse(const GrayImage& image, double k = kHarrisK);

}  // namespace serial

namespace omp {

void SquaredDistances(MatrixView a, MatrixView b, std::span<float> out);
std::vector<double> PairwiseDistances(std::span<const GlobalDescriptor> descriptors);
std::vector<double> HarrisResponse(const GrayImage& image, double k = kHarrisK);

}  // namespace omp

// Condensed index of pair (i, j), i < j, among n items.
constexpr std::size_t CondensedIndex(std::size_t n, std::size_t i, std::size_t j) {
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

// Threads the omp kernels may use; 0 restores the runtime default.
void SetThreadCount(int threads);
int ThreadCount();

}  // namespace rotatematch::kernels
