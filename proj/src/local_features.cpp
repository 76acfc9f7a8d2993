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

#include "rotatematch/local_features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>

#include "binary_io.hpp"
#include "rotatematch/error.hpp"
#include "rotatematch/image.hpp"
#include "rotatematch/kernels.hpp"

namespace rotatematch {
namespace {

constexpr char kMagic[] = "RMKP";
constexpr std::uint32_t kVersion = 1;

std::string Describe(Point2 p) {
  return "(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")";
}

// Ranked candidate before descriptor sampling.
struct Candidate {
  int x;
  int y;
  double score;
};

bool ComputeDescriptor(const GrayImage& view, int x, int y, float* out) {
  std::array<double, kLocalDescriptorDim> patch{};
  double mean = 0.0;
  int i = 0;
  const double half = (kPatchSide - 1) * kPatchStride / 2.0;
  for (int r = 0; r < kPatchSide; ++r) {
    for (int c = 0; c < kPatchSide; ++c) {
      patch[i] = SampleBilinear(view, x - half + c * kPatchStride,
                                y - half + r * kPatchStride);
      mean += patch[i++];
    }
  }
  mean /= kLocalDescriptorDim;
  double norm = 0.0;
  for (auto& v : patch) {
    v -= mean;
    norm += v * v;
  }
  // A flat patch carries no appearance and cannot be normalized.
  if (norm <= 0.0) return false;
  norm = std::sqrt(norm);
  for (int k = 0; k < kLocalDescriptorDim; ++k) {
    out[k] = static_cast<float>(patch[k] / norm);
  }
  return true;
}

void NormalizeRow(float* row, int dim, const std::string& id) {
  double norm = 0.0;
  for (int d = 0; d < dim; ++d) norm += static_cast<double>(row[d]) * row[d];
  norm = std::sqrt(norm);
  if (norm == 0.0) throw Error(ErrorCode::kNonFiniteValue, "zero-norm descriptor in " + id);
  if (std::abs(norm - 1.0) > 1e-6) {
    for (int d = 0; d < dim; ++d) row[d] = static_cast<float>(row[d] / norm);
  }
}

std::vector<FeatureSet> ParseRmkp(const std::filesystem::path& path,
                                  const std::map<std::string, ImageSize>* sizes) {
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
  const int dim = static_cast<int>(in.U32());
  std::vector<FeatureSet> out(count);
  for (auto& set : out) {
    set.image_id = in.String16();
    set.descriptor_dim = dim;
    const std::uint32_t n = in.U32();
    ImageSize size{};
    if (sizes) {
      auto it = sizes->find(set.image_id);
      if (it == sizes->end()) throw Error(ErrorCode::kUnknownId, set.image_id);
      size = it->second;
    }
    // Guard the allocation against a corrupt count.
    if (in.remaining() < static_cast<std::size_t>(n) * 14) {
      throw Error(ErrorCode::kTruncatedFile, path.string() + ": keypoints of " + set.image_id);
    }
    set.keypoints.resize(n);
    for (std::uint32_t k = 0; k < n; ++k) {
      auto& kp = set.keypoints[k];
      kp.x = in.F32();
      kp.y = in.F32();
      kp.score = in.F32();
      const int degrees = in.U16();
      if (!std::isfinite(kp.x) || !std::isfinite(kp.y) || !std::isfinite(kp.score)) {
        throw Error(ErrorCode::kNonFiniteValue,
                    set.image_id + " keypoint " + std::to_string(k));
      }
      kp.source_orientation = OrientationFromDegrees(degrees);
      if (sizes && !(kp.x >= 0.0 && kp.x < size.width && kp.y >= 0.0 &&
                     kp.y < size.height)) {
        throw Error(ErrorCode::kCoordOutOfBounds,
                    set.image_id + " keypoint " + std::to_string(k) + " at " +
                        Describe({kp.x, kp.y}));
      }
    }
    if (in.remaining() < static_cast<std::size_t>(n) * dim * 4) {
      throw Error(ErrorCode::kTruncatedFile, path.string() + ": descriptors of " + set.image_id);
    }
    set.descriptors.resize(static_cast<std::size_t>(n) * dim);
    for (auto& v : set.descriptors) {
      v = in.F32();
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kNonFiniteValue, "descriptor of " + set.image_id);
      }
    }
    for (std::uint32_t k = 0; k < n; ++k) {
      NormalizeRow(set.descriptors.data() + static_cast<std::size_t>(k) * dim, dim,
                   set.image_id);
    }
  }
  if (in.remaining() != 0) {
    throw Error(ErrorCode::kDimensionMismatch, path.string() + ": trailing bytes");
  }
  return out;
}

}  // namespace

ImageSize RotatedSize(ImageSize original, Orientation orientation) {
  if (orientation == Orientation::kR90 || orientation == Orientation::kR270) {
    return {original.height, original.width};
  }
  return original;
}

RotatedView RotateImage(const GrayImage& image, Orientation orientation) {
  const int w = image.width;
  const int h = image.height;
  const ImageSize size = RotatedSize({w, h}, orientation);
  RotatedView view{orientation, GrayImage(size.width, size.height)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int rx = x, ry = y;
      switch (orientation) {
        case Orientation::kR0: break;
        case Orientation::kR90: rx = h - 1 - y; ry = x; break;
        case Orientation::kR180: rx = w - 1 - x; ry = h - 1 - y; break;
        case Orientation::kR270: rx = y; ry = w - 1 - x; break;
      }
      view.image.at(rx, ry) = image.at(x, y);
    }
  }
  return view;
}

Point2 RotatePoint(Point2 p, Orientation orientation, int width, int height) {
  const double w1 = width - 1.0;
  const double h1 = height - 1.0;
  switch (orientation) {
    case Orientation::kR0: return p;
    case Orientation::kR90: return {h1 - p.y, p.x};
    case Orientation::kR180: return {w1 - p.x, h1 - p.y};
    case Orientation::kR270: return {p.y, w1 - p.x};
  }
  return p;
}

Point2 UnrotatePoint(Point2 r, Orientation orientation, int width, int height) {
  const ImageSize size = RotatedSize({width, height}, orientation);
  if (!(r.x >= 0.0 && r.x <= size.width - 1.0 && r.y >= 0.0 &&
        r.y <= size.height - 1.0)) {
    throw Error(ErrorCode::kOutOfBounds,
                Describe(r) + " outside rotated frame " + std::to_string(size.width) +
                    "x" + std::to_string(size.height));
  }
  const double w1 = width - 1.0;
  const double h1 = height - 1.0;
  switch (orientation) {
    case Orientation::kR0: return r;
    case Orientation::kR90: return {r.y, h1 - r.x};
    case Orientation::kR180: return {w1 - r.x, h1 - r.y};
    case Orientation::kR270: return {w1 - r.y, r.x};
  }
  return r;
}

double SampleBilinear(const GrayImage& image, double x, double y) {
  x = std::clamp(x, 0.0, image.width - 1.0);
  y = std::clamp(y, 0.0, image.height - 1.0);
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const int x1 = std::min(x0 + 1, image.width - 1);
  const int y1 = std::min(y0 + 1, image.height - 1);
  const double fx = x - x0;
  const double fy = y - y0;
  const double top = (1.0 - fx) * image.at(x0, y0) + fx * image.at(x1, y0);
  const double bottom = (1.0 - fx) * image.at(x0, y1) + fx * image.at(x1, y1);
  return (1.0 - fy) * top + fy * bottom;
}

Detection BuiltinDetect(const GrayImage& view, int max_keypoints) {
  Detection out;
  const int w = view.width;
  const int h = view.height;
  if (w < kMinDetectSide || h < kMinDetectSide || max_keypoints <= 0) return out;

  const auto response = kernels::omp::HarrisResponse(view);
  const double peak = *std::max_element(response.begin(), response.end());
  if (peak <= 0.0) return out;
  const double floor = kResponseFloor * peak;
  auto r = [&](int x, int y) { return response[static_cast<std::size_t>(y) * w + x]; };

  std::vector<Candidate> candidates;
  for (int y = kBorderMargin; y < h - kBorderMargin; ++y) {
    for (int x = kBorderMargin; x < w - kBorderMargin; ++x) {
      const double v = r(x, y);
      if (v <= floor) continue;
      // Plateaus keep their first pixel in scan order.
      bool is_max = true;
      for (int dy = -1; dy <= 1 && is_max; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          const double n = r(x + dx, y + dy);
          const bool earlier = dy < 0 || (dy == 0 && dx < 0);
          if (earlier ? n >= v : n > v) {
            is_max = false;
            break;
          }
        }
      }
      if (is_max) candidates.push_back({x, y, v});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.score > b.score; });

  std::array<float, kLocalDescriptorDim> descriptor{};
  for (const auto& c : candidates) {
    if (static_cast<int>(out.keypoints.size()) == max_keypoints) break;
    if (!ComputeDescriptor(view, c.x, c.y, descriptor.data())) continue;
    out.keypoints.push_back({static_cast<double>(c.x), static_cast<double>(c.y), c.score});
    out.descriptors.insert(out.descriptors.end(), descriptor.begin(), descriptor.end());
  }
  return out;
}

FeatureSet ExtractFeatures(std::string id, const GrayImage& image,
                           const PipelineConfig& config) {
  FeatureSet set;
  set.image_id = std::move(id);
  set.descriptor_dim = kLocalDescriptorDim;
  for (Orientation o : config.rotations) {
    const auto view = RotateImage(image, o);
    auto detection = BuiltinDetect(view.image, config.max_keypoints_per_orientation);
    for (const auto& kp : detection.keypoints) {
      const Point2 p = UnrotatePoint({kp.x, kp.y}, o, image.width, image.height);
      set.keypoints.push_back({p.x, p.y, kp.score, o});
    }
    set.descriptors.insert(set.descriptors.end(), detection.descriptors.begin(),
                           detection.descriptors.end());
  }
  return set;
}

std::vector<FeatureSet> ExtractAll(const DatasetManifest& manifest,
                                   const PipelineConfig& config) {
  const auto n = static_cast<std::ptrdiff_t>(manifest.images.size());
  std::vector<FeatureSet> out(manifest.images.size());
  // Exceptions must not cross the parallel region.
  std::vector<std::exception_ptr> errors(manifest.images.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto& record = manifest.images[i];
    try {
      out[i] = record.loaded() ? ExtractFeatures(record.id, record.image, config)
                               : ExtractFeatures(record.id, ReadPng(record.path), config);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

void WriteRmkp(const std::filesystem::path& path, std::span<const FeatureSet> features) {
  int dim = features.empty() ? 0 : features.front().descriptor_dim;
  for (const auto& set : features) {
    if (!set.keypoints.empty()) {
      dim = set.descriptor_dim;
      break;
    }
  }
  detail::ByteWriter out;
  out.Bytes(std::string_view(kMagic, 4));
  out.U32(kVersion);
  out.U32(static_cast<std::uint32_t>(features.size()));
  out.U32(static_cast<std::uint32_t>(dim));
  for (const auto& set : features) {
    if (!set.keypoints.empty() && set.descriptor_dim != dim) {
      throw Error(ErrorCode::kDimensionMismatch, "features of " + set.image_id);
    }
    if (set.descriptors.size() != set.keypoints.size() * static_cast<std::size_t>(dim)) {
      throw Error(ErrorCode::kDimensionMismatch, "descriptor rows of " + set.image_id);
    }
    out.String16(set.image_id);
    out.U32(static_cast<std::uint32_t>(set.keypoints.size()));
    for (const auto& kp : set.keypoints) {
      out.F32(static_cast<float>(kp.x));
      out.F32(static_cast<float>(kp.y));
      out.F32(static_cast<float>(kp.score));
      out.U16(static_cast<std::uint16_t>(Degrees(kp.source_orientation)));
    }
    for (float v : set.descriptors) out.F32(v);
  }
  out.Save(path);
}

std::vector<FeatureSet> LoadExternalFeatures(const std::filesystem::path& path,
                                             const std::map<std::string, ImageSize>& sizes) {
  return ParseRmkp(path, &sizes);
}

std::vector<FeatureSet> ReadRmkp(const std::filesystem::path& path) {
  return ParseRmkp(path, nullptr);
}

std::map<std::string, ImageSize> ImageSizes(const DatasetManifest& manifest) {
  std::map<std::string, ImageSize> out;
  for (const auto& record : manifest.images) {
    if (record.loaded()) {
      out[record.id] = {record.width(), record.height()};
    } else {
      const auto image = ReadPng(record.path);
      out[record.id] = {image.width, image.height};
    }
  }
  return out;
}

}  // namespace rotatematch
