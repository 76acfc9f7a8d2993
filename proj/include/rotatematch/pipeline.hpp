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

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "rotatematch/types.hpp"

namespace rotatematch {

struct RunOptions {
  // Feature and descriptor cache; empty disables caching.
  std::filesystem::path cache_dir;
};

// Global descriptors in manifest order from the configured backend. Built-in
// descriptors are cached by image digest.
std::vector<GlobalDescriptor> ProvideGlobalDescriptors(const DatasetManifest& manifest,
                                                       const PipelineConfig& config,
                                                       const RunOptions& options = {});

std::vector<CandidatePair> PairStage(const DatasetManifest& manifest,
                                     const PipelineConfig& config,
                                     const RunOptions& options = {});

// Local features in manifest order. Built-in features are cached per image,
// keyed by the image digest plus the extraction settings; external features
// are loaded and bounds-checked against the manifest's image sizes.
std::vector<FeatureSet> ExtractStage(const DatasetManifest& manifest,
                                     const PipelineConfig& config,
                                     const RunOptions& options = {});

std::map<std::string, FeatureSet> IndexFeatures(std::vector<FeatureSet> features);

struct DatasetSummary {
  std::string dataset_id;
  std::size_t images = 0;
  std::size_t pairs = 0;
  std::size_t kept_pairs = 0;
  std::size_t keypoints = 0;
  std::size_t clusters = 0;
  std::size_t outliers = 0;
};

// pairing -> extraction -> matching -> clustering for one manifest, writing
// pairs.jsonl, features.rmkp, matches.jsonl, clusters.json and summary.json
// under out_dir. Throws on any stage error; files already written remain.
DatasetSummary RunDataset(const DatasetManifest& manifest, const PipelineConfig& config,
                          const std::filesystem::path& out_dir, const RunOptions& options = {});

// Substitutes "{dataset_id}" in the external backend paths.
PipelineConfig ForDataset(const PipelineConfig& config, const std::string& dataset_id);

// Side-by-side SVG of a matched pair: both images embedded as base64 PNG, one
// <line> per correspondence and a caption with per-orientation counts.
std::string RenderMatchSvg(const PairMatchResult& result, const GrayImage& image_a,
                           const GrayImage& image_b);

}  // namespace rotatematch
