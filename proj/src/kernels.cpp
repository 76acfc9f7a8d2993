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

#include "rotatematch/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rotatematch/error.hpp"

namespace rotatematch::kernels {
namespace {

constexpr std::size_t kColumnBlock = 256;

std::vector<float> Transpose(MatrixView b) {
  std::vector<float> bt(b.rows * b.dim);
  for (std::size_t j = 0; j < b.rows; ++j) {
    for (std::size_t d = 0; d < b.dim; ++d) bt[d * b.rows + j] = b.data[j * b.dim + d];
  }
  return bt;
}

void CheckShapes(MatrixView a, MatrixView b, std::span<float> out) {
  if (a.dim != b.dim) {
    throw Error(ErrorCode::kDimensionMismatch,
                "descriptor dims " + std::to_string(a.dim) + " vs " +
                    std::to_string(b.dim));
  }
  if (out.size() != a.rows * b.rows) {
    throw Error(ErrorCode::kDimensionMismatch, "distance output has wrong size");
  }
}

// One output row. The inner loop runs over columns so it vectorizes without
// reassociating the per-element sum over d.
inline void DistanceRow(const float* arow, const float* bt, std::size_t nb,
                        std::size_t dim, float* out) {
  for (std::size_t j0 = 0; j0 < nb; j0 += kColumnBlock) {
    const std::size_t j1 = std::min(nb, j0 + kColumnBlock);
    float* acc = out + j0;
    std::fill(acc, acc + (j1 - j0), 0.0f);
    for (std::size_t d = 0; d < dim; ++d) {
      const float ad = arow[d];
      const float* col = bt + d * nb + j0;
      for (std::size_t j = 0; j < j1 - j0; ++j) {
        const float diff = ad - col[j];
        acc[j] += diff * diff;
      }
    }
  }
}

// Register tile for the omp path: R rows of A against 8 columns of B, held
// as two 4-lane vectors per row for the whole d loop. Each lane performs the
// same subtract, multiply and add sequence as DistanceRow.
using Lanes = float __attribute__((vector_size(16)));
constexpr std::size_t kLanes = 4;
constexpr std::size_t kTileCols = 2 * kLanes;
constexpr std::size_t kTileRows = 4;

std::vector<float> TransposePadded(MatrixView b, std::size_t padded) {
  std::vector<float> bt(padded * b.dim, 0.0f);
  for (std::size_t j = 0; j < b.rows; ++j) {
    for (std::size_t d = 0; d < b.dim; ++d) bt[d * padded + j] = b.data[j * b.dim + d];
  }
  return bt;
}

template <std::size_t R>
void DistanceTile(MatrixView a, std::size_t i0, const float* bt, std::size_t padded,
                  std::size_t nb, float* out) {
  const float* rows[R];
  for (std::size_t r = 0; r < R; ++r) rows[r] = a.row(i0 + r);
  for (std::size_t j0 = 0; j0 < nb; j0 += kTileCols) {
    Lanes lo[R] = {}, hi[R] = {};
    for (std::size_t d = 0; d < a.dim; ++d) {
      Lanes c0, c1;
      std::memcpy(&c0, bt + d * padded + j0, sizeof(Lanes));
      std::memcpy(&c1, bt + d * padded + j0 + kLanes, sizeof(Lanes));
      for (std::size_t r = 0; r < R; ++r) {
        const Lanes x0 = rows[r][d] - c0;
        lo[r] += x0 * x0;
        const Lanes x1 = rows[r][d] - c1;
        hi[r] += x1 * x1;
      }
    }
    const std::size_t width = std::min(kTileCols, nb - j0);
    for (std::size_t r = 0; r < R; ++r) {
      float lanes[kTileCols];
      std::memcpy(lanes, &lo[r], sizeof(Lanes));
      std::memcpy(lanes + kLanes, &hi[r], sizeof(Lanes));
      std::copy(lanes, lanes + width, out + (i0 + r) * nb + j0);
    }
  }
}

inline double DescriptorDistance(const GlobalDescriptor& p, const GlobalDescriptor& q) {
  double sum = 0.0;
  for (std::size_t d = 0; d < p.vector.size(); ++d) {
    const double diff = p.vector[d] - q.vector[d];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

void CheckUniformDim(std::span<const GlobalDescriptor> descriptors) {
  for (const auto& d : descriptors) {
    if (d.vector.size() != descriptors.front().vector.size()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "descriptor " + d.image_id + " has dim " +
                      std::to_string(d.vector.size()) + ", expected " +
                      std::to_string(descriptors.front().vector.size()));
    }
  }
}

inline int Clamp(int v, int hi) { return v < 0 ? 0 : (v > hi ? hi : v); }

struct Tensor {
  std::vector<double> xx, yy, xy;
};

inline void GradientRow(const GrayImage& img, int y, Tensor& t) {
  const int w = img.width;
  const int h = img.height;
  const int ym = Clamp(y - 1, h - 1);
  const int yp = Clamp(y + 1, h - 1);
  for (int x = 0; x < w; ++x) {
    const int xm = Clamp(x - 1, w - 1);
    const int xp = Clamp(x + 1, w - 1);
    const int gx = (img.at(xp, ym) + 2 * img.at(xp, y) + img.at(xp, yp)) -
                   (img.at(xm, ym) + 2 * img.at(xm, y) + img.at(xm, yp));
    const int gy = (img.at(xm, yp) + 2 * img.at(x, yp) + img.at(xp, yp)) -
                   (img.at(xm, ym) + 2 * img.at(x, ym) + img.at(xp, ym));
    const std::size_t i = static_cast<std::size_t>(y) * w + x;
    t.xx[i] = static_cast<double>(gx) * gx;
    t.yy[i] = static_cast<double>(gy) * gy;
    t.xy[i] = static_cast<double>(gx) * gy;
  }
}

inline void ResponseRow(const Tensor& t, int w, int h, int y, double k,
                        double* out) {
  for (int x = 0; x < w; ++x) {
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (int dy = -1; dy <= 1; ++dy) {
      const int yy = Clamp(y + dy, h - 1);
      for (int dx = -1; dx <= 1; ++dx) {
        const std::size_t i = static_cast<std::size_t>(yy) * w + Clamp(x + dx, w - 1);
        sxx += t.xx[i];
        syy += t.yy[i];
        sxy += t.xy[i];
      }
    }
    const double trace = sxx + syy;
    out[x] = (sxx * syy - sxy * sxy) - k * trace * trace;
  }
}

Tensor AllocTensor(const GrayImage& image) {
  const std::size_t n = image.pixels.size();
  return Tensor{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
}

}  // namespace

namespace serial {

void SquaredDistances(MatrixView a, MatrixView b, std::span<float> out) {
  CheckShapes(a, b, out);
  const auto bt = Transpose(b);
  for (std::size_t i = 0; i < a.rows; ++i) {
    DistanceRow(a.row(i), bt.data(), b.rows, a.dim, out.data() + i * b.rows);
  }
}

std::vector<double> PairwiseDistances(std::span<const GlobalDescriptor> descriptors) {
  const std::size_t n = descriptors.size();
  if (n < 2) return {};
  CheckUniformDim(descriptors);
  std::vector<double> out(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      out[CondensedIndex(n, i, j)] = DescriptorDistance(descriptors[i], descriptors[j]);
    }
  }
  return out;
}

std::vector<double> HarrisResponse(const GrayImage& image, double k) {
  std::vector<double> out(image.pixels.size());
  if (image.empty()) return out;
  Tensor t = AllocTensor(image);
  for (int y = 0; y < image.height; ++y) GradientRow(image, y, t);
  for (int y = 0; y < image.height; ++y) {
    ResponseRow(t, image.width, image.height, y, k,
                out.data() + static_cast<std::size_t>(y) * image.width);
  }
  return out;
}

}  // namespace serial

namespace omp {

void SquaredDistances(MatrixView a, MatrixView b, std::span<float> out) {
  CheckShapes(a, b, out);
  if (a.rows == 0 || b.rows == 0) return;
  const std::size_t padded = (b.rows + kTileCols - 1) / kTileCols * kTileCols;
  const auto bt = TransposePadded(b, padded);
  const auto tiles = static_cast<std::ptrdiff_t>(a.rows / kTileRows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < tiles; ++t) {
    DistanceTile<kTileRows>(a, t * kTileRows, bt.data(), padded, b.rows, out.data());
  }
  for (std::size_t i = tiles * kTileRows; i < a.rows; ++i) {
    DistanceTile<1>(a, i, bt.data(), padded, b.rows, out.data());
  }
}

std::vector<double> PairwiseDistances(std::span<const GlobalDescriptor> descriptors) {
  const std::size_t n = descriptors.size();
  if (n < 2) return {};
  CheckUniformDim(descriptors);
  std::vector<double> out(n * (n - 1) / 2);
  const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      out[CondensedIndex(n, i, j)] = DescriptorDistance(descriptors[i], descriptors[j]);
    }
  }
  return out;
}

std::vector<double> HarrisResponse(const GrayImage& image, double k) {
  std::vector<double> out(image.pixels.size());
  if (image.empty()) return out;
  Tensor t = AllocTensor(image);
  const int h = image.height;
#pragma omp parallel
  {
#pragma omp for schedule(static)
    for (int y = 0; y < h; ++y) GradientRow(image, y, t);
#pragma omp for schedule(static)
    for (int y = 0; y < h; ++y) {
      ResponseRow(t, image.width, h, y, k,
                  out.data() + static_cast<std::size_t>(y) * image.width);
    }
  }
  return out;
}

}  // namespace omp

void SetThreadCount(int threads) {
#ifdef _OPENMP
  omp_set_num_threads(threads > 0 ? threads : omp_get_num_procs());
#else
  (void)threads;
#endif
}

int ThreadCount() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace rotatematch::kernels
