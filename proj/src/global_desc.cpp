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

#include "rotatematch/global_desc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <map>

#include "binary_io.hpp"
#include "rotatematch/error.hpp"
#include "rotatematch/image.hpp"

namespace rotatematch {
namespace {

constexpr char kMagic[] = "RMDF";
constexpr std::uint32_t kVersion = 1;

// Overlap of [lo, hi) with pixel k, all in units of 1/kThumbnailSide pixel.
inline std::int64_t Overlap(std::int64_t lo, std::int64_t hi, std::int64_t k) {
  const std::int64_t p0 = k * kThumbnailSide;
  const std::int64_t p1 = p0 + kThumbnailSide;
  return std::max<std::int64_t>(0, std::min(hi, p1) - std::max(lo, p0));
}

}  // namespace

GlobalDescriptor BuiltinGlobalDescriptor(std::string id, const GrayImage& image) {
  if (image.empty()) throw Error(ErrorCode::kZeroAreaImage, id);
  const std::int64_t w = image.width;
  const std::int64_t h = image.height;

  // Coordinates are scaled by 8, so cell c spans [c*w, (c+1)*w) and every cell
  // sum is an exact integer; the true mean is sum / (w*h*64). Cells are stored
  // column by column.
  std::array<std::int64_t, kBuiltinGlobalDim> sums{};
  for (int cy = 0; cy < kThumbnailSide; ++cy) {
    const std::int64_t y0 = cy * h, y1 = y0 + h;
    for (int cx = 0; cx < kThumbnailSide; ++cx) {
      const std::int64_t x0 = cx * w, x1 = x0 + w;
      std::int64_t sum = 0;
      for (std::int64_t py = y0 / kThumbnailSide; py * kThumbnailSide < y1; ++py) {
        const std::int64_t wy = Overlap(y0, y1, py);
        if (wy == 0) continue;
        std::int64_t row = 0;
        for (std::int64_t px = x0 / kThumbnailSide; px * kThumbnailSide < x1; ++px) {
          row += Overlap(x0, x1, px) * image.at(static_cast<int>(px), static_cast<int>(py));
        }
        sum += wy * row;
      }
      sums[cx * kThumbnailSide + cy] = sum;
    }
  }

  std::int64_t total = 0;
  for (auto s : sums) total += s;
  // centred_c * (64 * w * h * 64) = 64 * sum_c - total, exact in integers.
  std::array<std::int64_t, kBuiltinGlobalDim> centred{};
  bool all_zero = true;
  for (int i = 0; i < kBuiltinGlobalDim; ++i) {
    centred[i] = kBuiltinGlobalDim * sums[i] - total;
    all_zero = all_zero && centred[i] == 0;
  }

  GlobalDescriptor out{std::move(id), std::vector<double>(kBuiltinGlobalDim)};
  if (all_zero) {
    std::fill(out.vector.begin(), out.vector.end(), 1.0 / kThumbnailSide);
    return out;
  }
  double norm = 0.0;
  for (auto c : centred) norm += static_cast<double>(c) * static_cast<double>(c);
  norm = std::sqrt(norm);
  for (int i = 0; i < kBuiltinGlobalDim; ++i) {
    out.vector[i] = static_cast<double>(centred[i]) / norm;
  }
  return out;
}

std::vector<GlobalDescriptor> BuiltinGlobalDescriptors(const DatasetManifest& manifest) {
  const auto n = static_cast<std::ptrdiff_t>(manifest.images.size());
  std::vector<GlobalDescriptor> out(manifest.images.size());
  // Exceptions must not cross the parallel region.
  std::vector<std::exception_ptr> errors(manifest.images.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto& record = manifest.images[i];
    try {
      out[i] = record.loaded()
                   ? BuiltinGlobalDescriptor(record.id, record.image)
                   : BuiltinGlobalDescriptor(record.id, ReadPng(record.path));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

void WriteRmdf(const std::filesystem::path& path,
               std::span<const GlobalDescriptor> descriptors) {
  const std::size_t dim = descriptors.empty() ? 0 : descriptors.front().vector.size();
  detail::ByteWriter out;
  out.Bytes(std::string_view(kMagic, 4));
  out.U32(kVersion);
  out.U32(static_cast<std::uint32_t>(descriptors.size()));
  out.U32(static_cast<std::uint32_t>(dim));
  for (const auto& d : descriptors) out.String16(d.image_id);
  for (const auto& d : descriptors) {
    if (d.vector.size() != dim) {
      throw Error(ErrorCode::kDimensionMismatch, "descriptor " + d.image_id);
    }
    for (double v : d.vector) out.F32(static_cast<float>(v));
  }
  out.Save(path);
}

std::vector<GlobalDescriptor> LoadExternalDescriptors(const std::filesystem::path& path) {
  auto in = detail::ByteReader::FromFile(path);
  if (in.remaining() < 4 || in.Bytes(4) != std::string_view(kMagic, 4)) {
    throw Error(ErrorCode::kBadMagic, path.string());
  }
  const std::uint32_t version = in.U32();
  if (version != kVersion) {
    throw Error(ErrorCode::kVersionUnsupported,
                path.string() + ": version " + std::to_string(version));
  }
  const std::uint32_t count = in.U32();
  const std::uint32_t dim = in.U32();
  std::vector<GlobalDescriptor> out(count);
  for (auto& d : out) d.image_id = in.String16();

  const std::size_t expected = static_cast<std::size_t>(count) * dim * 4;
  if (in.remaining() < expected) {
    throw Error(ErrorCode::kTruncatedFile,
                path.string() + ": descriptor matrix shorter than count x dim");
  }
  if (in.remaining() > expected || (count > 0 && dim == 0)) {
    throw Error(ErrorCode::kDimensionMismatch,
                path.string() + ": matrix size disagrees with header dim " +
                    std::to_string(dim));
  }
  for (auto& d : out) {
    d.vector.resize(dim);
    double norm = 0.0;
    for (auto& v : d.vector) {
      v = in.F32();
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kNonFiniteValue, "descriptor of " + d.image_id);
      }
      norm += v * v;
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) {
      throw Error(ErrorCode::kNonFiniteValue, "zero-norm descriptor of " + d.image_id);
    }
    if (std::abs(norm - 1.0) > kUnitNormTolerance) {
      for (auto& v : d.vector) v /= norm;
    }
  }
  return out;
}

std::vector<GlobalDescriptor> AlignToManifest(std::vector<GlobalDescriptor> descriptors,
                                              const DatasetManifest& manifest) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < descriptors.size(); ++i) {
    index.emplace(descriptors[i].image_id, i);
  }
  std::vector<GlobalDescriptor> out;
  out.reserve(manifest.images.size());
  for (const auto& image : manifest.images) {
    auto it = index.find(image.id);
    if (it == index.end()) {
      throw Error(ErrorCode::kUnknownId, "no global descriptor for " + image.id);
    }
    out.push_back(std::move(descriptors[it->second]));
  }
  return out;
}

}  // namespace rotatematch
