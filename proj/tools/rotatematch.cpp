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

// Command-line front end: `run` drives the whole pipeline, the other
// subcommands expose one stage each over the on-disk artifacts.

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "rotatematch/config_file.hpp"
#include "rotatematch/error.hpp"
#include "rotatematch/evaluation.hpp"
#include "rotatematch/formats.hpp"
#include "rotatematch/image.hpp"
#include "rotatematch/kernels.hpp"
#include "rotatematch/local_features.hpp"
#include "rotatematch/manifest.hpp"
#include "rotatematch/matching.hpp"
#include "rotatematch/pipeline.hpp"
#include "rotatematch/scene_graph.hpp"
#include "rotatematch/synthetic.hpp"

namespace fs = std::filesystem;
using namespace rotatematch;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;

// Flags shared by every subcommand that builds a PipelineConfig.
struct ConfigFlags {
  std::string config_path;
  std::optional<std::string> backend;
  std::optional<std::string> rotations;
  std::optional<int> match_gate;
  std::optional<int> min_pairs;
  std::optional<int> exhaustive_threshold;
  std::optional<std::string> distance_threshold;
  std::optional<int> max_keypoints;
  std::optional<double> ratio_test;

  void Register(CLI::App* app) {
    app->add_option("--config", config_path, "Pipeline config file (key = value)");
    app->add_option("--backend", backend, "builtin|external")
        ->check(CLI::IsMember({"builtin", "external"}));
    app->add_option("--rotations", rotations, "Comma-separated subset of 0,90,180,270");
    app->add_option("--match-gate", match_gate, "Minimum summed correspondences");
    app->add_option("--min-pairs", min_pairs, "Retrieval floor per dataset");
    app->add_option("--exhaustive-threshold", exhaustive_threshold,
                    "Datasets smaller than this are paired exhaustively");
    app->add_option("--distance-threshold", distance_threshold, "Number or 'auto'");
    app->add_option("--max-keypoints", max_keypoints, "Keypoints per orientation");
    app->add_option("--ratio-test", ratio_test, "Nearest/second-nearest ratio");
  }

  PipelineConfig Build() const {
    PipelineConfig config;
    if (!config_path.empty()) config = LoadConfigFile(config_path);
    if (backend) ApplyConfigValue(config, "backend", *backend);
    if (rotations) ApplyConfigValue(config, "rotations", *rotations);
    if (match_gate) config.match_gate = *match_gate;
    if (min_pairs) config.min_pairs = *min_pairs;
    if (exhaustive_threshold) config.exhaustive_threshold = *exhaustive_threshold;
    if (distance_threshold) ApplyConfigValue(config, "distance_threshold", *distance_threshold);
    if (max_keypoints) config.max_keypoints_per_orientation = *max_keypoints;
    if (ratio_test) config.ratio_test = *ratio_test;
    config.Validate();
    return config;
  }
};

void ConfigureLogging() {
  auto logger = spdlog::stderr_color_mt("rotatematch");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("ROTATEMATCH_LOG")) {
    const std::string l(level);
    if (l == "error") spdlog::set_level(spdlog::level::err);
    else if (l == "warn") spdlog::set_level(spdlog::level::warn);
    else if (l == "info") spdlog::set_level(spdlog::level::info);
    else if (l == "debug") spdlog::set_level(spdlog::level::debug);
    else spdlog::warn("ignoring ROTATEMATCH_LOG={}", l);
  }
}

DatasetManifest LoadValidManifest(const std::string& path) {
  DatasetManifest manifest = LoadManifest(path);
  const auto violations = ValidateManifest(manifest);
  if (!violations.empty()) {
    std::string message = path + ":";
    for (const auto& v : violations) message += "\n  " + v;
    throw Error(ErrorCode::kInvalidValue, message);
  }
  return manifest;
}

RunOptions Options(const fs::path& out, bool no_cache, const std::string& cache) {
  RunOptions options;
  if (!no_cache) options.cache_dir = cache.empty() ? out / "cache" : fs::path(cache);
  return options;
}

std::pair<std::string, std::string> SplitPair(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw Error(ErrorCode::kInvalidValue, "--pair expects a,b");
  }
  return {text.substr(0, comma), text.substr(comma + 1)};
}

}  // namespace

int main(int argc, char** argv) {
  ConfigureLogging();
  CLI::App app{"Rotation-augmented image matching and scene clustering"};
  app.require_subcommand(1);
  app.fallthrough();
  int jobs = 0;
  app.add_option("--jobs", jobs, "Worker threads (0 = all cores)");

  // run
  auto* run = app.add_subcommand("run", "pairing -> extraction -> matching -> clustering");
  ConfigFlags run_flags;
  run_flags.Register(run);
  std::vector<std::string> run_manifests;
  std::string run_out, run_cache;
  bool run_no_cache = false;
  run->add_option("--manifest", run_manifests, "Dataset manifest(s)")->required();
  run->add_option("--out", run_out, "Output directory")->required();
  run->add_option("--cache", run_cache, "Cache directory (default OUT/cache)");
  run->add_flag("--no-cache", run_no_cache, "Disable the feature cache");

  // pair
  auto* pair = app.add_subcommand("pair", "Write candidate pairs");
  ConfigFlags pair_flags;
  pair_flags.Register(pair);
  std::string pair_manifest, pair_out;
  pair->add_option("--manifest", pair_manifest)->required();
  pair->add_option("--out", pair_out)->required();

  // extract
  auto* extract = app.add_subcommand("extract", "Write rotation-augmented local features");
  ConfigFlags extract_flags;
  extract_flags.Register(extract);
  std::string extract_manifest, extract_out;
  extract->add_option("--manifest", extract_manifest)->required();
  extract->add_option("--out", extract_out)->required();

  // match
  auto* match = app.add_subcommand("match", "Two-stage matching of candidate pairs");
  ConfigFlags match_flags;
  match_flags.Register(match);
  std::string match_pairs, match_features, match_out;
  match->add_option("--pairs", match_pairs, "pairs.jsonl")->required();
  match->add_option("--features", match_features, "features.rmkp")->required();
  match->add_option("--out", match_out)->required();

  // cluster
  auto* cluster = app.add_subcommand("cluster", "Connected components of kept pairs");
  std::string cluster_manifest, cluster_matches, cluster_out;
  cluster->add_option("--manifest", cluster_manifest)->required();
  cluster->add_option("--matches", cluster_matches, "matches.jsonl")->required();
  cluster->add_option("--out", cluster_out)->required();

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Score predicted clusters against ground truth");
  std::vector<std::string> eval_gt, eval_pred;
  std::string eval_out = ".";
  evaluate->add_option("--gt", eval_gt, "Ground-truth clusters, one per dataset")->required();
  evaluate->add_option("--pred", eval_pred, "Predicted clusters, same order")->required();
  evaluate->add_option("--out", eval_out, "Directory for metrics.json");

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic multi-scene dataset");
  SynthConfig synth_config;
  std::string synth_out;
  synth->add_option("--out", synth_out)->required();
  synth->add_option("--seed", synth_config.seed);
  synth->add_option("--scenes", synth_config.scenes);
  synth->add_option("--views", synth_config.views_per_scene);
  synth->add_option("--outliers", synth_config.outliers);
  synth->add_option("--base-size", synth_config.base_size);
  synth->add_option("--crop-fraction", synth_config.crop_fraction);
  synth->add_option("--brightness-jitter", synth_config.brightness_jitter);

  // viz
  auto* viz = app.add_subcommand("viz", "Render one pair's correspondences as SVG");
  std::string viz_matches, viz_manifest, viz_pair, viz_out;
  viz->add_option("--matches", viz_matches)->required();
  viz->add_option("--manifest", viz_manifest)->required();
  viz->add_option("--pair", viz_pair, "a,b")->required();
  viz->add_option("--out", viz_out, "Output .svg")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    kernels::SetThreadCount(jobs);

    if (*run) {
      const PipelineConfig config = run_flags.Build();
      const fs::path out(run_out);
      nlohmann::ordered_json summary = nlohmann::ordered_json::array();
      std::set<std::string> seen;
      for (const auto& path : run_manifests) {
        const DatasetManifest manifest = LoadValidManifest(path);
        if (!seen.insert(manifest.dataset_id).second) {
          throw Error(ErrorCode::kDuplicateId, "dataset " + manifest.dataset_id);
        }
        const auto s = RunDataset(manifest, config, out / manifest.dataset_id,
                                  Options(out, run_no_cache, run_cache));
        summary.push_back({{"dataset_id", s.dataset_id},
                           {"images", s.images},
                           {"pairs", s.pairs},
                           {"kept_pairs", s.kept_pairs},
                           {"clusters", s.clusters},
                           {"outliers", s.outliers}});
        std::cout << s.dataset_id << ": " << s.pairs << " pairs, " << s.kept_pairs << " kept, "
                  << s.clusters << " clusters, " << s.outliers << " outliers\n";
      }
      WriteTextFile(out / "summary.json", summary.dump(2) + "\n");
    } else if (*pair) {
      const PipelineConfig config = pair_flags.Build();
      const auto manifest = LoadValidManifest(pair_manifest);
      fs::create_directories(pair_out);
      const auto pairs = PairStage(manifest, config);
      WritePairs(fs::path(pair_out) / "pairs.jsonl", pairs);
      std::cout << pairs.size() << " pairs\n";
    } else if (*extract) {
      const PipelineConfig config = extract_flags.Build();
      const auto manifest = LoadValidManifest(extract_manifest);
      fs::create_directories(extract_out);
      const auto features = ExtractStage(manifest, config);
      WriteRmkp(fs::path(extract_out) / "features.rmkp", features);
      std::size_t total = 0;
      for (const auto& f : features) total += f.size();
      std::cout << total << " keypoints over " << features.size() << " images\n";
    } else if (*match) {
      const PipelineConfig config = match_flags.Build();
      const auto pairs = ReadPairs(match_pairs);
      const auto features = IndexFeatures(ReadRmkp(match_features));
      fs::create_directories(match_out);
      const auto results = MatchAll(pairs, features, config);
      WriteMatches(fs::path(match_out) / "matches.jsonl", results);
      std::size_t kept = 0;
      for (const auto& r : results) kept += r.kept ? 1 : 0;
      std::cout << kept << " of " << results.size() << " pairs kept\n";
    } else if (*cluster) {
      const auto manifest = LoadManifest(cluster_manifest);
      const auto results = ReadMatches(cluster_matches);
      const auto ids = manifest.ids();
      const Clustering clustering = BuildClusters(ids, results);
      fs::create_directories(cluster_out);
      WriteClustering(fs::path(cluster_out) / "clusters.json", clustering);
      std::cout << clustering.clusters.size() << " clusters, " << clustering.outliers.size()
                << " outliers\n";
    } else if (*evaluate) {
      if (eval_gt.size() != eval_pred.size()) {
        std::cerr << "error: --gt and --pred need the same number of files\n";
        return kExitUsage;
      }
      std::vector<DatasetEvalInput> inputs;
      bool consistent = true;
      for (std::size_t i = 0; i < eval_gt.size(); ++i) {
        DatasetEvalInput input;
        input.gt = ReadClustering(eval_gt[i]);
        input.pred = ReadClustering(eval_pred[i]);
        const fs::path pred_path(eval_pred[i]);
        input.dataset_id = pred_path.parent_path().filename().string();
        if (input.dataset_id.empty() || input.dataset_id == ".") {
          input.dataset_id = "dataset" + std::to_string(i);
        }
        for (const auto* c : {&input.gt, &input.pred}) {
          for (const auto& v : ClusteringViolations(*c)) {
            std::cerr << "error: " << (c == &input.gt ? eval_gt[i] : eval_pred[i]) << ": " << v
                      << "\n";
            consistent = false;
          }
        }
        const auto diff = CompareUniverses(input.gt, input.pred);
        if (!diff.empty()) {
          consistent = false;
          std::cerr << "error: image ids differ between " << eval_gt[i] << " and "
                    << eval_pred[i] << "\n";
          for (const auto& id : diff.only_gt) std::cerr << "  only in ground truth: " << id << "\n";
          for (const auto& id : diff.only_pred) std::cerr << "  only in prediction: " << id << "\n";
        }
        inputs.push_back(std::move(input));
      }
      if (!consistent) return kExitError;
      const auto report = EvaluateDatasets(inputs);
      fs::create_directories(eval_out);
      WriteMetrics(fs::path(eval_out) / "metrics.json", report);
      std::printf("maa %.4f\ncl %.4f\nscore %.4f\n", report.maa, report.cl, report.score);
    } else if (*synth) {
      const auto dataset = GenerateDataset(synth_config, synth_out);
      std::cout << dataset.manifest.images.size() << " images written to " << synth_out << "\n";
    } else if (*viz) {
      const auto [a, b] = SplitPair(viz_pair);
      const auto wanted = CandidatePair::Make(a, b);
      const auto results = ReadMatches(viz_matches);
      const PairMatchResult* found = nullptr;
      for (const auto& r : results) {
        if (r.pair.a == wanted.a && r.pair.b == wanted.b) found = &r;
      }
      if (!found) throw Error(ErrorCode::kPairNotFound, wanted.a + "," + wanted.b);
      DatasetManifest manifest = LoadManifest(viz_manifest);
      const GrayImage* image_a = nullptr;
      const GrayImage* image_b = nullptr;
      for (auto& record : manifest.images) {
        if (record.id == wanted.a || record.id == wanted.b) {
          LoadPixels(record);
          (record.id == wanted.a ? image_a : image_b) = &record.image;
        }
      }
      if (!image_a || !image_b) {
        throw Error(ErrorCode::kUnknownId, "pair images not in manifest " + viz_manifest);
      }
      WriteTextFile(viz_out, RenderMatchSvg(*found, *image_a, *image_b));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitOk;
}
