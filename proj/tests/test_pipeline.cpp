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

#include "rotatematch/digest.hpp"
#include "rotatematch/formats.hpp"
#include "rotatematch/global_desc.hpp"
#include "rotatematch/image.hpp"
#include "rotatematch/local_features.hpp"
#include "rotatematch/manifest.hpp"
#include "rotatematch/pairing.hpp"
#include "rotatematch/pipeline.hpp"
#include "rotatematch/scene_graph.hpp"
#include "rotatematch/synthetic.hpp"
#include "test_util.hpp"

namespace rotatematch {
namespace {

namespace fs = std::filesystem;
using testing::CodeOf;
using testing::ReadFile;
using testing::TempDir;

SynthDataset Small(const fs::path& dir, std::uint64_t seed = 21) {
  SynthConfig config;
  config.seed = seed;
  config.scenes = 2;
  config.views_per_scene = 3;
  config.outliers = 1;
  config.base_size = 128;
  return GenerateDataset(config, dir);
}

PipelineConfig Quick() {
  PipelineConfig config;
  config.max_keypoints_per_orientation = 128;
  return config;
}

std::size_t CountFiles(const fs::path& dir) {
  std::size_t n = 0;
  for (const auto& e : fs::recursive_directory_iterator(dir)) n += e.is_regular_file() ? 1 : 0;
  return n;
}

TEST(Pipeline, CacheHitEqualsFreshComputation) {
  TempDir dir;
  const auto dataset = Small(dir.path());
  const DatasetManifest on_disk = LoadManifest(dir / "manifest.json");
  const RunOptions cached{dir / "cache"};

  const auto fresh = ExtractStage(on_disk, Quick());
  const auto first = ExtractStage(on_disk, Quick(), cached);
  EXPECT_EQ(CountFiles(dir / "cache" / "features"), on_disk.images.size());
  const auto second = ExtractStage(on_disk, Quick(), cached);
  ASSERT_EQ(fresh.size(), second.size());
  for (std::size_t i = 0; i < fresh.size(); ++i) {
    EXPECT_EQ(first[i].image_id, fresh[i].image_id);
    EXPECT_EQ(second[i].image_id, fresh[i].image_id);
    EXPECT_EQ(second[i].descriptors, fresh[i].descriptors);
    ASSERT_EQ(second[i].size(), fresh[i].size());
    for (std::size_t k = 0; k < fresh[i].size(); ++k) {
      EXPECT_EQ(second[i].keypoints[k].x, fresh[i].keypoints[k].x);
      EXPECT_EQ(second[i].keypoints[k].score, fresh[i].keypoints[k].score);
      EXPECT_EQ(second[i].keypoints[k].source_orientation, fresh[i].keypoints[k].source_orientation);
    }
  }

  // Different settings get their own entries.
  PipelineConfig fewer = Quick();
  fewer.rotations = {Orientation::kR0};
  ExtractStage(on_disk, fewer, cached);
  EXPECT_EQ(CountFiles(dir / "cache" / "features"), 2 * on_disk.images.size());

  const auto global_fresh = ProvideGlobalDescriptors(on_disk, Quick());
  ProvideGlobalDescriptors(on_disk, Quick(), cached);
  const auto global_hit = ProvideGlobalDescriptors(on_disk, Quick(), cached);
  for (std::size_t i = 0; i < global_fresh.size(); ++i) {
    EXPECT_EQ(global_hit[i].image_id, global_fresh[i].image_id);
    for (std::size_t d = 0; d < global_fresh[i].vector.size(); ++d) {
      EXPECT_NEAR(global_hit[i].vector[d], global_fresh[i].vector[d], 1e-7);
    }
  }
}

TEST(Pipeline, RunDatasetWritesConsistentArtifacts) {
  TempDir dir;
  const auto dataset = Small(dir.path());
  const auto summary = RunDataset(dataset.manifest, Quick(), dir / "out");
  EXPECT_EQ(summary.images, 7u);
  EXPECT_EQ(summary.pairs, PairCount(7));
  for (const char* name :
       {"pairs.jsonl", "features.rmkp", "matches.jsonl", "clusters.json", "summary.json"}) {
    EXPECT_TRUE(fs::is_regular_file(dir / "out" / name)) << name;
  }
  const auto pairs = ReadPairs(dir / "out" / "pairs.jsonl");
  EXPECT_EQ(pairs, ExhaustivePairs(dataset.manifest.ids()));
  const auto features = LoadExternalFeatures(dir / "out" / "features.rmkp", ImageSizes(dataset.manifest));
  ASSERT_EQ(features.size(), 7u);
  std::size_t keypoints = 0;
  for (const auto& f : features) keypoints += f.size();
  EXPECT_EQ(summary.keypoints, keypoints);
  const auto matches = ReadMatches(dir / "out" / "matches.jsonl");
  ASSERT_EQ(matches.size(), pairs.size());
  std::size_t kept = 0;
  for (std::size_t i = 0; i < matches.size(); ++i) {
    EXPECT_EQ(matches[i].pair, pairs[i]);
    kept += matches[i].kept ? 1 : 0;
  }
  EXPECT_EQ(summary.kept_pairs, kept);
  const auto ids = dataset.manifest.ids();
  const auto expected = BuildClusters(ids, matches);
  const auto clusters = ReadClustering(dir / "out" / "clusters.json");
  EXPECT_EQ(clusters.clusters, expected.clusters);
  EXPECT_EQ(clusters.outliers, expected.outliers);
  EXPECT_EQ(summary.clusters, clusters.clusters.size());
}

TEST(Pipeline, ExternalBackendReadsAdapterFiles) {
  TempDir dir;
  const auto dataset = Small(dir.path(), 22);
  const auto builtin_features = ExtractAll(dataset.manifest, Quick());
  WriteRmkp(dir / "local-synth-22.rmkp", builtin_features);
  const auto builtin_global = BuiltinGlobalDescriptors(dataset.manifest);
  std::vector<GlobalDescriptor> reversed(builtin_global.rbegin(), builtin_global.rend());
  WriteRmdf(dir / "global-synth-22.rmdf", reversed);

  // Force retrieval so the descriptor file is read.
  PipelineConfig builtin = Quick();
  builtin.exhaustive_threshold = 2;
  builtin.min_pairs = 6;
  PipelineConfig external = builtin;
  external.backend = Backend::kExternal;
  external.global_descriptors = dir / "global-{dataset_id}.rmdf";
  external.local_features = dir / "local-{dataset_id}.rmkp";
  RunDataset(dataset.manifest, external, dir / "ext");
  RunDataset(dataset.manifest, builtin, dir / "int");
  const auto ext_pairs = ReadPairs(dir / "ext" / "pairs.jsonl");
  const auto int_pairs = ReadPairs(dir / "int" / "pairs.jsonl");
  ASSERT_EQ(ext_pairs.size(), int_pairs.size());
  EXPECT_GE(ext_pairs.size(), 6u);
  EXPECT_LT(ext_pairs.size(), PairCount(7));
  for (std::size_t i = 0; i < ext_pairs.size(); ++i) {
    EXPECT_EQ(ext_pairs[i].a, int_pairs[i].a);
    EXPECT_EQ(ext_pairs[i].b, int_pairs[i].b);
    EXPECT_TRUE(ext_pairs[i].scored);
    EXPECT_NEAR(ext_pairs[i].distance, int_pairs[i].distance, 1e-6);
  }
  for (const char* name : {"matches.jsonl", "clusters.json"}) {
    EXPECT_EQ(ReadFile(dir / "ext" / name), ReadFile(dir / "int" / name)) << name;
  }

  external.local_features = dir / "missing.rmkp";
  EXPECT_EQ(CodeOf([&] { RunDataset(dataset.manifest, external, dir / "x"); }), ErrorCode::kIo);
  WriteRmkp(dir / "partial.rmkp", std::span(builtin_features).first(3));
  external.local_features = dir / "partial.rmkp";
  EXPECT_EQ(CodeOf([&] { RunDataset(dataset.manifest, external, dir / "x"); }),
            ErrorCode::kMissingFeatures);
}

TEST(Pipeline, RejectsInvalidManifest) {
  TempDir dir;
  DatasetManifest manifest;
  manifest.dataset_id = "bad";
  manifest.images.push_back({"a", dir / "nope.png", {}});
  EXPECT_EQ(CodeOf([&] { RunDataset(manifest, Quick(), dir / "o"); }), ErrorCode::kInvalidValue);
  PipelineConfig wrong = Quick();
  wrong.match_gate = 0;
  const auto dataset = Small(dir.path());
  EXPECT_EQ(CodeOf([&] { RunDataset(dataset.manifest, wrong, dir / "o"); }), ErrorCode::kConfig);
}

TEST(Pipeline, ForDatasetSubstitutesEveryPlaceholder) {
  PipelineConfig config;
  config.global_descriptors = "/data/{dataset_id}/g-{dataset_id}.rmdf";
  config.local_features = "plain.rmkp";
  const auto out = ForDataset(config, "ds1");
  EXPECT_EQ(out.global_descriptors, fs::path("/data/ds1/g-ds1.rmdf"));
  EXPECT_EQ(out.local_features, fs::path("plain.rmkp"));
}

std::size_t Occurrences(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

TEST(Pipeline, MatchSvg) {
  PairMatchResult result;
  result.pair = CandidatePair::Make("a<1>", "b");
  result.stage1_counts = {1, 2, 3, 4};
  result.total = 10;
  result.kept = false;
  result.correspondences = {{0, 0, 1, 2, 3, 4}, {1, 1, 5, 6, 7, 8}, {2, 2, 0, 0, 0, 0}};
  const GrayImage a(20, 10, 100), b(30, 40, 200);
  const std::string svg = RenderMatchSvg(result, a, b);
  EXPECT_EQ(Occurrences(svg, "<line "), 3u);
  EXPECT_EQ(Occurrences(svg, "<image "), 2u);
  EXPECT_NE(svg.find("width=\"60\" height=\"96\""), std::string::npos);
  EXPECT_NE(svg.find("a&lt;1&gt; / b"), std::string::npos);
  EXPECT_NE(svg.find("stage1 0:1 90:2 180:3 270:4"), std::string::npos);
  EXPECT_NE(svg.find("total 10: dropped (&lt; gate)"), std::string::npos);
  EXPECT_NE(svg.find("x1=\"1.5\" y1=\"2.5\" x2=\"33.5\" y2=\"4.5\""), std::string::npos);
  EXPECT_NE(svg.find("base64," + Base64(EncodePng(a))), std::string::npos);
  result.kept = true;
  EXPECT_NE(RenderMatchSvg(result, a, b).find("total 10: kept"), std::string::npos);
}

}  // namespace
}  // namespace rotatematch
