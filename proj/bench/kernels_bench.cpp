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

// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>

#include "rotatematch/kernels.hpp"
#include "rotatematch/synthetic.hpp"

namespace {

using namespace rotatematch;

std::vector<float> RandomRows(std::size_t rows, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> normal;
  std::vector<float> out(rows * dim);
  for (auto& v : out) v = normal(rng);
  return out;
}

std::vector<GlobalDescriptor> RandomDescriptors(std::size_t n, std::size_t dim) {
  const auto data = RandomRows(n, dim, 7);
  std::vector<GlobalDescriptor> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].image_id = std::to_string(i);
    out[i].vector.assign(data.begin() + i * dim, data.begin() + (i + 1) * dim);
  }
  return out;
}

template <void (*Fn)(kernels::MatrixView, kernels::MatrixView, std::span<float>)>
void BM_SquaredDistances(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  constexpr std::size_t kDim = 64;
  const auto a = RandomRows(n, kDim, 1);
  const auto b = RandomRows(n, kDim, 2);
  std::vector<float> out(n * n);
  for (auto _ : state) {
    Fn({a.data(), n, kDim}, {b.data(), n, kDim}, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}

template <std::vector<double> (*Fn)(std::span<const GlobalDescriptor>)>
void BM_PairwiseDistances(benchmark::State& state) {
  const auto descriptors = RandomDescriptors(static_cast<std::size_t>(state.range(0)), 768);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(descriptors));
}

template <std::vector<double> (*Fn)(const GrayImage&, double)>
void BM_HarrisResponse(benchmark::State& state) {
  const GrayImage image = SceneTexture(3, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(image, kernels::kHarrisK));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

BENCHMARK(BM_SquaredDistances<kernels::serial::SquaredDistances>)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SquaredDistances<kernels::omp::SquaredDistances>)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairwiseDistances<kernels::serial::PairwiseDistances>)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairwiseDistances<kernels::omp::PairwiseDistances>)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HarrisResponse<kernels::serial::HarrisResponse>)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HarrisResponse<kernels::omp::HarrisResponse>)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
