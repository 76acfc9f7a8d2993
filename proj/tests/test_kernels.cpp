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

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "rotatematch/kernels.hpp"
#include "test_util.hpp"

namespace rotatematch {
namespace {

std::vector<float> RandomRows(std::mt19937_64& rng, std::size_t rows, std::size_t dim) {
  std::normal_distribution<float> normal;
  std::vector<float> out(rows * dim);
  for (auto& v : out) v = normal(rng);
  return out;
}

bool BitEqual(std::span<const float> x, std::span<const float> y) {
  return x.size() == y.size() && std::memcmp(x.data(), y.data(), x.size() * sizeof(float)) == 0;
}

class ThreadCounts : public ::testing::TestWithParam<int> {
 protected:
  void SetUp() override { kernels::SetThreadCount(GetParam()); }
  void TearDown() override { kernels::SetThreadCount(0); }
};

TEST_P(ThreadCounts, SquaredDistancesBitIdentical) {
  std::mt19937_64 rng(5);
  const std::size_t shapes[][3] = {{1, 1, 3},   {3, 5, 64},   {4, 8, 64},  {17, 9, 64},
                                   {33, 257, 64}, {130, 70, 128}, {7, 300, 5}};
  for (const auto& s : shapes) {
    const auto a = RandomRows(rng, s[0], s[2]);
    const auto b = RandomRows(rng, s[1], s[2]);
    std::vector<float> ref(s[0] * s[1]), par(s[0] * s[1], -1.0f);
    kernels::serial::SquaredDistances({a.data(), s[0], s[2]}, {b.data(), s[1], s[2]}, ref);
    kernels::omp::SquaredDistances({a.data(), s[0], s[2]}, {b.data(), s[1], s[2]}, par);
    EXPECT_TRUE(BitEqual(ref, par)) << s[0] << "x" << s[1] << "x" << s[2];
  }
}

TEST_P(ThreadCounts, PairwiseDistancesBitIdentical) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> normal;
  for (std::size_t n : {0u, 1u, 2u, 5u, 40u}) {
    std::vector<GlobalDescriptor> d(n);
    for (std::size_t i = 0; i < n; ++i) {
      d[i].image_id = std::to_string(i);
      d[i].vector.resize(64);
      for (auto& v : d[i].vector) v = normal(rng);
    }
    const auto ref = kernels::serial::PairwiseDistances(d);
    const auto par = kernels::omp::PairwiseDistances(d);
    ASSERT_EQ(ref.size(), n < 2 ? 0 : n * (n - 1) / 2);
    EXPECT_EQ(std::memcmp(ref.data(), par.data(), ref.size() * sizeof(double)), 0);
  }
}

TEST_P(ThreadCounts, HarrisResponseBitIdentical) {
  std::mt19937_64 rng(7);
  for (auto [w, h] : {std::pair{1, 1}, {2, 3}, {31, 17}, {64, 64}, {101, 43}}) {
    const GrayImage image = testing::RandomImage(rng, w, h);
    const auto ref = kernels::serial::HarrisResponse(image);
    const auto par = kernels::omp::HarrisResponse(image);
    ASSERT_EQ(ref.size(), static_cast<std::size_t>(w) * h);
    EXPECT_EQ(std::memcmp(ref.data(), par.data(), ref.size() * sizeof(double)), 0);
  }
}

INSTANTIATE_TEST_SUITE_P(Kernels, ThreadCounts, ::testing::Values(1, 2, 4));

TEST(Kernels, SquaredDistancesMatchDoubleOracle) {
  std::mt19937_64 rng(8);
  const std::size_t na = 13, nb = 21, dim = 64;
  const auto a = RandomRows(rng, na, dim);
  const auto b = RandomRows(rng, nb, dim);
  std::vector<float> out(na * nb);
  kernels::omp::SquaredDistances({a.data(), na, dim}, {b.data(), nb, dim}, out);
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      double expected = 0.0;
      for (std::size_t d = 0; d < dim; ++d) {
        const double diff = static_cast<double>(a[i * dim + d]) - b[j * dim + d];
        expected += diff * diff;
      }
      EXPECT_NEAR(out[i * nb + j], expected, 1e-4 * expected + 1e-6);
    }
  }
}

TEST(Kernels, ShapeErrors) {
  std::vector<float> a(6), b(8), out(4);
  EXPECT_EQ(testing::CodeOf([&] {
              kernels::omp::SquaredDistances({a.data(), 2, 3}, {b.data(), 2, 4}, out);
            }),
            ErrorCode::kDimensionMismatch);
  EXPECT_EQ(testing::CodeOf([&] {
              kernels::serial::SquaredDistances({a.data(), 2, 3}, {a.data(), 2, 3},
                                                std::span<float>(out.data(), 3));
            }),
            ErrorCode::kDimensionMismatch);
  std::vector<GlobalDescriptor> d{{"a", {1.0, 0.0}}, {"b", {1.0}}};
  EXPECT_EQ(testing::CodeOf([&] { kernels::omp::PairwiseDistances(d); }),
            ErrorCode::kDimensionMismatch);
}

TEST(Kernels, CondensedIndexEnumeratesUpperTriangle) {
  const std::size_t n = 9;
  std::size_t expected = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) EXPECT_EQ(kernels::CondensedIndex(n, i, j), expected++);
  }
}

// Direct evaluation of det - k trace^2 with clamped Sobel gradients and a
// clamped 3x3 box sum.
TEST(Kernels, HarrisMatchesDefinition) {
  std::mt19937_64 rng(9);
  const GrayImage image = testing::RandomImage(rng, 9, 7);
  auto px = [&](int x, int y) {
    x = std::clamp(x, 0, image.width - 1);
    y = std::clamp(y, 0, image.height - 1);
    return static_cast<double>(image.at(x, y));
  };
  auto grad = [&](int x, int y) {
    const double gx = px(x + 1, y - 1) + 2 * px(x + 1, y) + px(x + 1, y + 1) - px(x - 1, y - 1) -
                      2 * px(x - 1, y) - px(x - 1, y + 1);
    const double gy = px(x - 1, y + 1) + 2 * px(x, y + 1) + px(x + 1, y + 1) - px(x - 1, y - 1) -
                      2 * px(x, y - 1) - px(x + 1, y - 1);
    return std::pair{gx, gy};
  };
  const auto response = kernels::serial::HarrisResponse(image, 0.06);
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      double sxx = 0, syy = 0, sxy = 0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int xx = std::clamp(x + dx, 0, image.width - 1);
          const int yy = std::clamp(y + dy, 0, image.height - 1);
          const auto [gx, gy] = grad(xx, yy);
          sxx += gx * gx;
          syy += gy * gy;
          sxy += gx * gy;
        }
      }
      const double expected = sxx * syy - sxy * sxy - 0.06 * (sxx + syy) * (sxx + syy);
      EXPECT_NEAR(response[static_cast<std::size_t>(y) * image.width + x], expected,
                  1e-9 * std::max(1.0, std::abs(expected)));
    }
  }
}

}  // namespace
}  // namespace rotatematch
