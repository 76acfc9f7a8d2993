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

#include "rotatematch/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "rotatematch/error.hpp"
#include "rotatematch/formats.hpp"
#include "rotatematch/image.hpp"
#include "rotatematch/local_features.hpp"
#include "rotatematch/manifest.hpp"

namespace rotatematch {
namespace {

namespace fs = std::filesystem;

// Octave cells run from kCoarsestCell down to kFinestCell pixels. Finer
// octaves get larger weights so that 15-pixel descriptor patches see mostly
// scene-specific detail.
constexpr int kCoarsestCell = 64;
constexpr int kFinestCell = 2;
constexpr double kOctaveGain = 1.3;

// std:: distributions are implementation-defined; these helpers keep the
// output identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [lo, hi].
  int Int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(engine_() % span);
  }
  // Uniform in [0, 1).
  double Real() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::uint64_t Bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

double Smooth(double t) { return t * t * (3.0 - 2.0 * t); }

void AddValueNoise(Rng& rng, int size, int cell, double amplitude, std::vector<double>& acc) {
  const int lattice = size / cell + 2;
  std::vector<double> grid(static_cast<std::size_t>(lattice) * lattice);
  for (auto& g : grid) g = rng.Real();
  for (int y = 0; y < size; ++y) {
    const int gy = y / cell;
    const double ty = Smooth(static_cast<double>(y % cell) / cell);
    for (int x = 0; x < size; ++x) {
      const int gx = x / cell;
      const double tx = Smooth(static_cast<double>(x % cell) / cell);
      auto g = [&](int i, int j) { return grid[static_cast<std::size_t>(j) * lattice + i]; };
      const double top = g(gx, gy) * (1 - tx) + g(gx + 1, gy) * tx;
      const double bottom = g(gx, gy + 1) * (1 - tx) + g(gx + 1, gy + 1) * tx;
      acc[static_cast<std::size_t>(y) * size + x] += amplitude * (top * (1 - ty) + bottom * ty);
    }
  }
}

// Shapes keep the underlying texture at a fifth of its contrast, pushed to
// one end of the range.
std::uint8_t ShapeValue(std::uint8_t texture, bool dark) {
  return static_cast<std::uint8_t>(dark ? texture / 5 : 255 - (255 - texture) / 5);
}

GrayImage RenderView(const GrayImage& base, const SynthView& view) {
  GrayImage crop(view.crop_side, view.crop_side);
  for (int y = 0; y < view.crop_side; ++y) {
    for (int x = 0; x < view.crop_side; ++x) {
      const int v = base.at(view.crop_x + x, view.crop_y + y) + view.brightness;
      crop.at(x, y) = static_cast<std::uint8_t>(std::clamp(v, 0, 255));
    }
  }
  return RotateImage(crop, view.orientation).image;
}

std::string Id(const char* prefix, int a, int b = -1) {
  char buf[32];
  if (b < 0) {
    std::snprintf(buf, sizeof(buf), "%s%02d", prefix, a);
  } else {
    std::snprintf(buf, sizeof(buf), "%s%02dv%02d", prefix, a, b);
  }
  return buf;
}

}  // namespace

std::vector<std::string> SynthConfig::Violations() const {
  std::vector<std::string> out;
  if (scenes < 1) out.push_back("scenes must be >= 1");
  if (views_per_scene < 2) out.push_back("views_per_scene must be >= 2");
  if (outliers < 0) out.push_back("outliers must be >= 0");
  if (base_size < 32) out.push_back("base_size must be >= 32");
  if (!(crop_fraction > 0.5 && crop_fraction <= 1.0)) {
    out.push_back("crop_fraction must lie in (0.5, 1]");
  }
  if (brightness_jitter < 0 || brightness_jitter > 255) {
    out.push_back("brightness_jitter must lie in [0, 255]");
  }
  return out;
}

GrayImage SceneTexture(std::uint64_t seed, int size) {
  Rng rng(seed);
  std::vector<double> acc(static_cast<std::size_t>(size) * size, 0.0);
  double amplitude = 1.0;
  for (int cell = kCoarsestCell; cell >= kFinestCell; cell /= 2) {
    AddValueNoise(rng, size, std::min(cell, size), amplitude, acc);
    amplitude *= kOctaveGain;
  }
  const auto [lo, hi] = std::minmax_element(acc.begin(), acc.end());
  const double span = std::max(*hi - *lo, 1e-12);
  GrayImage image(size, size);
  for (std::size_t i = 0; i < acc.size(); ++i) {
    image.pixels[i] = static_cast<std::uint8_t>(std::lround(40.0 + 175.0 * (acc[i] - *lo) / span));
  }

  const int shapes = rng.Int(6, 12);
  for (int s = 0; s < shapes; ++s) {
    const bool dark = rng.Int(0, 1) == 0;
    if (rng.Int(0, 1) == 0) {
      const int w = rng.Int(size / 16, size / 4);
      const int h = rng.Int(size / 16, size / 4);
      const int x0 = rng.Int(0, size - w);
      const int y0 = rng.Int(0, size - h);
      for (int y = y0; y < y0 + h; ++y) {
        for (int x = x0; x < x0 + w; ++x) image.at(x, y) = ShapeValue(image.at(x, y), dark);
      }
    } else {
      const int r = rng.Int(size / 32, size / 8);
      const int cx = rng.Int(r, size - 1 - r);
      const int cy = rng.Int(r, size - 1 - r);
      for (int y = cy - r; y <= cy + r; ++y) {
        for (int x = cx - r; x <= cx + r; ++x) {
          if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) {
            image.at(x, y) = ShapeValue(image.at(x, y), dark);
          }
        }
      }
    }
  }
  return image;
}

SynthDataset RenderDataset(const SynthConfig& config, const fs::path& out_dir) {
  if (const auto v = config.Violations(); !v.empty()) {
    throw Error(ErrorCode::kConfig, v.front());
  }
  Rng rng(config.seed);
  SynthDataset out;
  out.manifest.dataset_id = "synth-" + std::to_string(config.seed);
  const int side = std::clamp(static_cast<int>(std::lround(config.crop_fraction * config.base_size)),
                              1, config.base_size);

  auto add_view = [&](const GrayImage& base, std::string id, std::optional<int> scene) {
    SynthView view;
    view.id = std::move(id);
    view.scene = scene;
    view.crop_side = side;
    view.crop_x = rng.Int(0, config.base_size - side);
    view.crop_y = rng.Int(0, config.base_size - side);
    view.orientation = static_cast<Orientation>(rng.Int(0, 3));
    view.brightness = rng.Int(-config.brightness_jitter, config.brightness_jitter);
    ImageRecord record;
    record.id = view.id;
    record.path = out_dir / "images" / (view.id + ".png");
    record.image = RenderView(base, view);
    out.manifest.images.push_back(std::move(record));
    out.views.push_back(std::move(view));
  };

  for (int s = 0; s < config.scenes; ++s) {
    const GrayImage base = SceneTexture(rng.Bits(), config.base_size);
    std::vector<std::string> members;
    for (int v = 0; v < config.views_per_scene; ++v) {
      members.push_back(Id("s", s, v));
      add_view(base, members.back(), s);
    }
    std::sort(members.begin(), members.end());
    out.ground_truth.clusters.push_back(std::move(members));
  }
  for (int o = 0; o < config.outliers; ++o) {
    const GrayImage base = SceneTexture(rng.Bits(), config.base_size);
    out.ground_truth.outliers.push_back(Id("o", o));
    add_view(base, out.ground_truth.outliers.back(), std::nullopt);
  }
  std::sort(out.ground_truth.outliers.begin(), out.ground_truth.outliers.end());
  return out;
}

SynthDataset GenerateDataset(const SynthConfig& config, const fs::path& out_dir) {
  auto dataset = RenderDataset(config, out_dir);
  std::error_code ec;
  fs::create_directories(out_dir / "images", ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + (out_dir / "images").string());
  for (const auto& record : dataset.manifest.images) WritePng(record.path, record.image);
  WriteManifest(out_dir / "manifest.json", dataset.manifest);
  WriteClustering(out_dir / "gt.json", dataset.ground_truth);
  return dataset;
}

}  // namespace rotatematch
