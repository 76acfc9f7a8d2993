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

#include "rotatematch/pipeline.hpp"

#include <spdlog/spdlog.h>

#include <exception>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rotatematch/config_file.hpp"
#include "rotatematch/digest.hpp"
#include "rotatematch/error.hpp"
#include "rotatematch/formats.hpp"
#include "rotatematch/global_desc.hpp"
#include "rotatematch/image.hpp"
#include "rotatematch/local_features.hpp"
#include "rotatematch/manifest.hpp"
#include "rotatematch/matching.hpp"
#include "rotatematch/pairing.hpp"
#include "rotatematch/scene_graph.hpp"

namespace rotatematch {
namespace {

namespace fs = std::filesystem;

// Bump when the built-in extractors change their output.
constexpr std::string_view kFeatureCacheTag = "builtin-features-v1";
constexpr std::string_view kGlobalCacheTag = "builtin-global-v1";

std::string PixelDigest(const GrayImage& image) {
  std::string bytes = std::to_string(image.width) + "x" + std::to_string(image.height) + ":";
  bytes.append(reinterpret_cast<const char*>(image.pixels.data()), image.pixels.size());
  return Sha256Hex(bytes);
}

std::string FeatureKey(const std::string& pixel_digest, const PipelineConfig& config) {
  std::string settings(kFeatureCacheTag);
  settings += "|rotations=";
  for (Orientation o : config.rotations) settings += std::to_string(Degrees(o)) + ",";
  settings += "|max_keypoints=" + std::to_string(config.max_keypoints_per_orientation);
  return Sha256Hex(pixel_digest + "|" + settings);
}

std::string GlobalKey(const std::string& pixel_digest) {
  return Sha256Hex(pixel_digest + "|" + std::string(kGlobalCacheTag));
}

GrayImage Pixels(const ImageRecord& record) {
  return record.loaded() ? record.image : ReadPng(record.path);
}

void RethrowFirst(const std::vector<std::exception_ptr>& errors) {
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Shared shape of the two cached per-image computations: compute or load in
// parallel, then write the misses on the calling thread after the join.
template <typename Value, typename KeyFn, typename LoadFn, typename ComputeFn, typename StoreFn>
std::vector<Value> CachedPerImage(const DatasetManifest& manifest, const fs::path& cache_dir,
                                  KeyFn key_fn, LoadFn load, ComputeFn compute, StoreFn store) {
  const std::size_t n = manifest.images.size();
  std::vector<Value> out(n);
  std::vector<fs::path> miss_paths(n);
  std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    try {
      const auto& record = manifest.images[i];
      const GrayImage image = Pixels(record);
      if (!cache_dir.empty()) {
        const fs::path cached = cache_dir / key_fn(PixelDigest(image));
        std::error_code ec;
        if (fs::is_regular_file(cached, ec)) {
          out[i] = load(cached, record.id);
          continue;
        }
        miss_paths[i] = cached;
      }
      out[i] = compute(record.id, image);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  RethrowFirst(errors);
  std::size_t misses = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (miss_paths[i].empty()) continue;
    fs::create_directories(miss_paths[i].parent_path());
    store(miss_paths[i], out[i]);
    ++misses;
  }
  if (!cache_dir.empty()) {
    spdlog::debug("cache {}: {} hits, {} misses", cache_dir.string(), n - misses, misses);
  }
  return out;
}

std::string XmlEscape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string CountsText(const OrientationCounts& counts) {
  std::string out;
  for (Orientation o : kAllOrientations) {
    if (!out.empty()) out += ' ';
    out += std::to_string(Degrees(o)) + ":" + std::to_string(counts[Index(o)]);
  }
  return out;
}

}  // namespace

PipelineConfig ForDataset(const PipelineConfig& config, const std::string& dataset_id) {
  auto substitute = [&](const fs::path& p) {
    std::string s = p.string();
    constexpr std::string_view kToken = "{dataset_id}";
    for (auto pos = s.find(kToken); pos != std::string::npos; pos = s.find(kToken)) {
      s.replace(pos, kToken.size(), dataset_id);
    }
    return fs::path(s);
  };
  PipelineConfig out = config;
  out.global_descriptors = substitute(config.global_descriptors);
  out.local_features = substitute(config.local_features);
  return out;
}

std::vector<GlobalDescriptor> ProvideGlobalDescriptors(const DatasetManifest& manifest,
                                                       const PipelineConfig& config,
                                                       const RunOptions& options) {
  if (config.backend == Backend::kExternal) {
    return AlignToManifest(LoadExternalDescriptors(config.global_descriptors), manifest);
  }
  const fs::path dir = options.cache_dir.empty() ? fs::path{} : options.cache_dir / "global";
  return CachedPerImage<GlobalDescriptor>(
      manifest, dir, [](const std::string& digest) { return GlobalKey(digest) + ".rmdf"; },
      [](const fs::path& path, const std::string& id) {
        auto loaded = LoadExternalDescriptors(path);
        if (loaded.size() != 1) throw Error(ErrorCode::kParse, "bad cache entry " + path.string());
        loaded.front().image_id = id;
        return loaded.front();
      },
      [](const std::string& id, const GrayImage& image) {
        return BuiltinGlobalDescriptor(id, image);
      },
      [](const fs::path& path, const GlobalDescriptor& d) {
        WriteRmdf(path, std::span<const GlobalDescriptor>(&d, 1));
      });
}

std::vector<CandidatePair> PairStage(const DatasetManifest& manifest,
                                     const PipelineConfig& config, const RunOptions& options) {
  return AdaptivePairs(
      manifest,
      [&](const DatasetManifest& m) { return ProvideGlobalDescriptors(m, config, options); },
      config);
}

std::vector<FeatureSet> ExtractStage(const DatasetManifest& manifest,
                                     const PipelineConfig& config, const RunOptions& options) {
  if (config.backend == Backend::kExternal) {
    auto loaded = IndexFeatures(LoadExternalFeatures(config.local_features, ImageSizes(manifest)));
    std::vector<FeatureSet> out;
    for (const auto& record : manifest.images) {
      auto it = loaded.find(record.id);
      if (it == loaded.end()) throw Error(ErrorCode::kMissingFeatures, record.id);
      out.push_back(std::move(it->second));
    }
    return out;
  }
  const fs::path dir = options.cache_dir.empty() ? fs::path{} : options.cache_dir / "features";
  return CachedPerImage<FeatureSet>(
      manifest, dir,
      [&](const std::string& digest) { return FeatureKey(digest, config) + ".rmkp"; },
      [](const fs::path& path, const std::string& id) {
        auto loaded = ReadRmkp(path);
        if (loaded.size() != 1) throw Error(ErrorCode::kParse, "bad cache entry " + path.string());
        loaded.front().image_id = id;
        return loaded.front();
      },
      [&](const std::string& id, const GrayImage& image) {
        auto set = ExtractFeatures(id, image, config);
        // Match what a cache hit would return.
        for (auto& kp : set.keypoints) kp.score = static_cast<float>(kp.score);
        return set;
      },
      [](const fs::path& path, const FeatureSet& set) {
        WriteRmkp(path, std::span<const FeatureSet>(&set, 1));
      });
}

std::map<std::string, FeatureSet> IndexFeatures(std::vector<FeatureSet> features) {
  std::map<std::string, FeatureSet> out;
  for (auto& set : features) {
    std::string id = set.image_id;
    if (!out.emplace(std::move(id), std::move(set)).second) {
      throw Error(ErrorCode::kDuplicateId, "features listed twice for one image");
    }
  }
  return out;
}

DatasetSummary RunDataset(const DatasetManifest& input, const PipelineConfig& base_config,
                          const fs::path& out_dir, const RunOptions& options) {
  if (const auto violations = ValidateManifest(input); !violations.empty()) {
    std::string message = input.dataset_id + ":";
    for (const auto& v : violations) message += " " + v + ";";
    throw Error(ErrorCode::kInvalidValue, message);
  }
  const PipelineConfig config = ForDataset(base_config, input.dataset_id);
  config.Validate();
  fs::create_directories(out_dir);

  DatasetManifest manifest = input;
  DatasetSummary summary;
  summary.dataset_id = manifest.dataset_id;
  summary.images = manifest.images.size();

  spdlog::info("[{}] pairing {} images", manifest.dataset_id, manifest.images.size());
  const auto pairs = PairStage(manifest, config, options);
  WritePairs(out_dir / "pairs.jsonl", pairs);
  summary.pairs = pairs.size();

  spdlog::info("[{}] extracting features", manifest.dataset_id);
  auto features = ExtractStage(manifest, config, options);
  WriteRmkp(out_dir / "features.rmkp", features);
  for (const auto& set : features) summary.keypoints += set.size();

  spdlog::info("[{}] matching {} pairs", manifest.dataset_id, pairs.size());
  const auto results = MatchAll(pairs, IndexFeatures(std::move(features)), config);
  WriteMatches(out_dir / "matches.jsonl", results);
  for (const auto& r : results) summary.kept_pairs += r.kept ? 1 : 0;

  const auto ids = manifest.ids();
  const Clustering clustering = BuildClusters(ids, results);
  WriteClustering(out_dir / "clusters.json", clustering);
  summary.clusters = clustering.clusters.size();
  summary.outliers = clustering.outliers.size();
  spdlog::info("[{}] {} of {} pairs kept, {} clusters, {} outliers", manifest.dataset_id,
               summary.kept_pairs, summary.pairs, summary.clusters, summary.outliers);

  nlohmann::ordered_json doc;
  doc["dataset_id"] = summary.dataset_id;
  doc["images"] = summary.images;
  doc["pairs"] = summary.pairs;
  doc["kept_pairs"] = summary.kept_pairs;
  doc["keypoints"] = summary.keypoints;
  doc["clusters"] = summary.clusters;
  doc["outliers"] = summary.outliers;
  doc["config"] = RenderConfig(config);
  WriteTextFile(out_dir / "summary.json", doc.dump(2) + "\n");
  return summary;
}

std::string RenderMatchSvg(const PairMatchResult& result, const GrayImage& image_a,
                           const GrayImage& image_b) {
  constexpr int kGap = 10;
  constexpr int kCaption = 56;
  const int offset = image_a.width + kGap;
  const int width = offset + image_b.width;
  const int height = std::max(image_a.height, image_b.height) + kCaption;
  const int base = height - kCaption;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<image x=\"0\" y=\"0\" width=\"" << image_a.width << "\" height=\"" << image_a.height
      << "\" href=\"data:image/png;base64," << Base64(EncodePng(image_a)) << "\"/>\n";
  svg << "<image x=\"" << offset << "\" y=\"0\" width=\"" << image_b.width << "\" height=\""
      << image_b.height << "\" href=\"data:image/png;base64," << Base64(EncodePng(image_b))
      << "\"/>\n";
  svg << "<g stroke=\"" << (result.kept ? "#10b010" : "#d02020")
      << "\" stroke-width=\"1\" stroke-opacity=\"0.7\">\n";
  // Pixel centres sit at integer coordinates; the raster covers [0, w).
  for (const auto& c : result.correspondences) {
    svg << "<line x1=\"" << c.xa + 0.5 << "\" y1=\"" << c.ya + 0.5 << "\" x2=\""
        << offset + c.xb + 0.5 << "\" y2=\"" << c.yb + 0.5 << "\"/>\n";
  }
  svg << "</g>\n";
  svg << "<g font-family=\"monospace\" font-size=\"12\" fill=\"black\">\n";
  svg << "<text x=\"4\" y=\"" << base + 16 << "\">" << XmlEscape(result.pair.a) << " / "
      << XmlEscape(result.pair.b) << "</text>\n";
  svg << "<text x=\"4\" y=\"" << base + 32 << "\">stage1 " << CountsText(result.stage1_counts)
      << " | stage2 " << CountsText(result.stage2_counts) << "</text>\n";
  svg << "<text x=\"4\" y=\"" << base + 48 << "\">total " << result.total << ": "
      << (result.kept ? "kept" : XmlEscape("dropped (< gate)")) << "</text>\n";
  svg << "</g>\n</svg>\n";
  return svg.str();
}

}  // namespace rotatematch
