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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances and limits are fixed below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gate_fixture.hpp"
#include "rotatematch/evaluation.hpp"
#include "rotatematch/formats.hpp"
#include "rotatematch/local_features.hpp"
#include "rotatematch/matching.hpp"
#include "rotatematch/pairing.hpp"
#include "rotatematch/synthetic.hpp"
#include "test_util.hpp"

namespace rotatematch {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

constexpr double kMetricTolerance = 1e-12;
constexpr double kMetricSeconds = 10.0;
constexpr int kMetricCases = 500;
constexpr double kRealPointTolerance = 1e-9;
constexpr int kRoundTripPoints = 10000;
constexpr int kMaxImageSide = 4096;
constexpr std::uint64_t kSynthSeed = 7;
constexpr double kE2eSeconds = 60.0;
constexpr double kE2eMinMaa = 0.9;
constexpr double kE2eMinCl = 0.9;
// Every image of the 28-image dataset is paired with every other.
constexpr int kE2eExhaustiveThreshold = 29;

int failures = 0;

void Report(bool pass, const std::string& name, const std::string& detail) {
  std::printf("%s %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string Format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return buf;
}

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

// ---- metric oracle

Clustering RandomClustering(std::mt19937_64& rng, const std::vector<std::string>& ids) {
  const int k = 1 + static_cast<int>(rng() % 5);
  std::vector<std::vector<std::string>> clusters(k);
  std::vector<std::string> outliers;
  for (const auto& id : ids) {
    const int slot = static_cast<int>(rng() % (k + 1));
    (slot == k ? outliers : clusters[slot]).push_back(id);
  }
  std::erase_if(clusters, [](const auto& c) { return c.empty(); });
  std::shuffle(clusters.begin(), clusters.end(), rng);
  for (auto& c : clusters) std::sort(c.begin(), c.end());
  std::sort(outliers.begin(), outliers.end());
  return {clusters, outliers};
}

struct OracleResult {
  std::size_t objective = 0;
  double maa = 0.0, cl = 0.0, score = 0.0;
};

// Exhaustive enumeration of injective partial assignments. Among optima the
// lexicographically smallest one is used, "none" ordering last.
OracleResult MetricOracle(const Clustering& gt, const Clustering& pred) {
  const std::size_t g = gt.clusters.size(), p = pred.clusters.size();
  std::vector<std::vector<std::size_t>> w(g, std::vector<std::size_t>(p, 0));
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      for (const auto& id : gt.clusters[i]) {
        w[i][j] += std::count(pred.clusters[j].begin(), pred.clusters[j].end(), id);
      }
    }
  }
  std::vector<std::size_t> choice(g, p), best(g, p);
  std::vector<char> used(p, 0);
  std::size_t best_total = 0;
  bool found = false;
  std::function<void(std::size_t, std::size_t)> visit = [&](std::size_t i, std::size_t total) {
    if (i == g) {
      if (!found || total > best_total || (total == best_total && choice < best)) {
        best_total = total;
        best = choice;
        found = true;
      }
      return;
    }
    for (std::size_t j = 0; j < p; ++j) {
      if (used[j] || w[i][j] == 0) continue;
      used[j] = 1;
      choice[i] = j;
      visit(i + 1, total + w[i][j]);
      used[j] = 0;
    }
    choice[i] = p;
    visit(i + 1, total);
  };
  visit(0, 0);

  OracleResult out;
  out.objective = best_total;
  std::size_t num = 0, den = 0;
  for (std::size_t i = 0; i < g; ++i) {
    if (best[i] == p) continue;
    out.maa += static_cast<double>(w[i][best[i]]) / static_cast<double>(gt.clusters[i].size());
    num += w[i][best[i]];
    den += pred.clusters[best[i]].size();
  }
  if (g > 0) out.maa /= static_cast<double>(g);
  out.cl = den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  out.score = out.maa + out.cl == 0.0 ? 0.0 : 2.0 * out.maa * out.cl / (out.maa + out.cl);
  return out;
}

void MetricOracleCriterion() {
  std::mt19937_64 rng(20260101);
  const auto start = Clock::now();
  int mismatches = 0;
  double worst = 0.0;
  for (int c = 0; c < kMetricCases; ++c) {
    std::vector<std::string> ids;
    const int n = 1 + static_cast<int>(rng() % 12);
    for (int i = 0; i < n; ++i) ids.push_back("img" + std::to_string(i));
    const Clustering gt = RandomClustering(rng, ids);
    const Clustering pred = RandomClustering(rng, ids);
    const OracleResult oracle = MetricOracle(gt, pred);
    const EvalReport report = Evaluate(gt, pred);
    const double err = std::max({std::abs(report.maa - oracle.maa), std::abs(report.cl - oracle.cl),
                                 std::abs(report.score - oracle.score)});
    worst = std::max(worst, err);
    if (AlignedIntersection(gt, pred, report.alignment) != oracle.objective ||
        err > kMetricTolerance) {
      ++mismatches;
    }
  }
  const double seconds = Seconds(start);
  Report(mismatches == 0 && seconds < kMetricSeconds, "metric-oracle",
         Format("%d cases, %d mismatches, max error %.3g (tol %.0e), %.2f s (limit %.0f s)",
                kMetricCases, mismatches, worst, kMetricTolerance, seconds, kMetricSeconds));
}

// ---- worked example

void WorkedExampleCriterion() {
  const Clustering gt{{{"a", "b", "c"}, {"d", "e"}}, {}};
  const Clustering pred{{{"a", "b"}, {"c", "d", "e"}}, {}};
  const EvalReport r = Evaluate(gt, pred);
  const bool pass = std::abs(r.maa - 5.0 / 6.0) <= kMetricTolerance &&
                    std::abs(r.cl - 4.0 / 5.0) <= kMetricTolerance &&
                    std::abs(r.score - 40.0 / 49.0) <= kMetricTolerance;
  Report(pass, "worked-example",
         Format("maa %.15f (5/6), cl %.15f (4/5), score %.15f (40/49)", r.maa, r.cl, r.score));
}

// ---- rotation round trip

void RotationRoundTripCriterion() {
  std::mt19937_64 rng(4096);
  std::uniform_int_distribution<int> side(1, kMaxImageSide);
  int integer_failures = 0, real_failures = 0;
  double worst = 0.0;
  for (int i = 0; i < kRoundTripPoints; ++i) {
    const int w = side(rng), h = side(rng);
    const Point2 integer{static_cast<double>(rng() % w), static_cast<double>(rng() % h)};
    std::uniform_real_distribution<double> ux(0.0, w - 1.0), uy(0.0, h - 1.0);
    const Point2 real{ux(rng), uy(rng)};
    for (Orientation o : kAllOrientations) {
      if (UnrotatePoint(RotatePoint(integer, o, w, h), o, w, h) != integer) ++integer_failures;
      const Point2 back = UnrotatePoint(RotatePoint(real, o, w, h), o, w, h);
      const double err = std::max(std::abs(back.x - real.x), std::abs(back.y - real.y));
      worst = std::max(worst, err);
      if (err > kRealPointTolerance) ++real_failures;
    }
  }
  Report(integer_failures == 0 && real_failures == 0, "rotation-round-trip",
         Format("%d integer + %d real points x 4 orientations, sides <= %d: %d inexact integer, "
                "%d real beyond %.0e (max error %.3g)",
                kRoundTripPoints, kRoundTripPoints, kMaxImageSide, integer_failures,
                real_failures, kRealPointTolerance, worst));
}

// ---- pairing counts

void PairingCountsCriterion() {
  const PipelineConfig config;
  std::mt19937_64 rng(2025);
  std::normal_distribution<double> normal;
  std::vector<std::string> problems;
  for (std::size_t n = 2; n <= 25; ++n) {
    DatasetManifest manifest;
    manifest.dataset_id = "n" + std::to_string(n);
    std::vector<GlobalDescriptor> descriptors;
    for (std::size_t i = 0; i < n; ++i) {
      const std::string id = "im" + std::to_string((i * 7) % n) + "_" + std::to_string(i);
      manifest.images.push_back({id, {}, {}});
      std::vector<double> v(16);
      double norm = 0.0;
      for (auto& x : v) {
        x = normal(rng);
        norm += x * x;
      }
      for (auto& x : v) x /= std::sqrt(norm);
      descriptors.push_back({id, v});
    }
    const auto pairs = AdaptivePairs(
        manifest, [&](const DatasetManifest&) { return descriptors; }, config);
    const std::size_t all = PairCount(n);
    std::set<std::pair<std::string, std::string>> distinct;
    bool canonical = true, sorted = true;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      canonical = canonical && pairs[i].a < pairs[i].b;
      distinct.emplace(pairs[i].a, pairs[i].b);
      if (i == 0) continue;
      const auto& p = pairs[i - 1];
      const auto& q = pairs[i];
      const bool ordered = n < static_cast<std::size_t>(config.exhaustive_threshold)
                               ? std::tie(p.a, p.b) < std::tie(q.a, q.b)
                               : std::tie(p.distance, p.a, p.b) < std::tie(q.distance, q.a, q.b);
      sorted = sorted && ordered;
    }
    const bool dedup = distinct.size() == pairs.size();
    const bool count_ok = n < static_cast<std::size_t>(config.exhaustive_threshold)
                              ? pairs.size() == all
                              : pairs.size() >= std::min<std::size_t>(config.min_pairs, all) &&
                                    pairs.size() <= all;
    if (!(canonical && sorted && dedup && count_ok)) {
      problems.push_back(Format("N=%zu gave %zu pairs (sorted %d, dedup %d)", n, pairs.size(),
                                sorted, dedup));
    }
  }
  Report(problems.empty(), "pairing-counts",
         problems.empty() ? "N=2..25: C(N,2) below 20, >= min(20, C(N,2)) from 20, all sorted and "
                            "deduplicated"
                          : problems.front());
}

// ---- gate boundary

void GateBoundaryCriterion() {
  const PipelineConfig config;
  const auto at24 = testing::FeaturePairTotalling(12, 0);
  const auto at25 = testing::FeaturePairTotalling(11, 1);
  const auto r24 = MatchPairTwoStage(at24.a, at24.b, config);
  const auto r25 = MatchPairTwoStage(at25.a, at25.b, config);
  const bool pass = config.match_gate == 25 && r24.total == 24 && !r24.kept &&
                    r25.total == 25 && r25.kept;
  Report(pass, "gate-boundary",
         Format("gate %d: total %d -> kept=%s, total %d -> kept=%s", config.match_gate, r24.total,
                r24.kept ? "true" : "false", r25.total, r25.kept ? "true" : "false"));
}

// ---- CLI-driven criteria on one synthetic dataset

std::string Quote(const fs::path& p) { return "\"" + p.string() + "\""; }

struct RunOutcome {
  bool ok = false;
  double seconds = 0.0;
  std::string error;
};

RunOutcome CliRun(const fs::path& manifest, const fs::path& out, const std::string& flags,
                  const fs::path& scratch) {
  const auto start = Clock::now();
  const auto r = testing::RunCli(
      "run --manifest " + Quote(manifest) + " --out " + Quote(out) + " " + flags, scratch);
  return {r.exit_code == 0, Seconds(start), r.err};
}

double MeanTotal(const fs::path& matches) {
  const auto results = ReadMatches(matches);
  if (results.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& r : results) sum += r.total;
  return sum / static_cast<double>(results.size());
}

// Relative path -> bytes for every regular file under `root`.
std::map<std::string, std::string> Snapshot(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) {
      out[fs::relative(e.path(), root).generic_string()] = testing::ReadFile(e.path());
    }
  }
  return out;
}

void SyntheticCriteria() {
  testing::TempDir dir;
  SynthConfig synth;
  synth.seed = kSynthSeed;
  const SynthDataset dataset = GenerateDataset(synth, dir / "data");
  const fs::path manifest = dir / "data" / "manifest.json";
  const std::string dataset_dir = dataset.manifest.dataset_id;
  const std::string exhaustive = "--exhaustive-threshold " + std::to_string(kE2eExhaustiveThreshold);

  // End to end, cold cache.
  const RunOutcome run1 = CliRun(manifest, dir / "run1", exhaustive, dir.path());
  EvalReport e2e;
  if (run1.ok) {
    e2e = Evaluate(dataset.ground_truth, ReadClustering(dir / "run1" / dataset_dir / "clusters.json"));
  }
  Report(run1.ok && run1.seconds < kE2eSeconds && e2e.maa >= kE2eMinMaa && e2e.cl >= kE2eMinCl,
         "end-to-end",
         run1.ok ? Format("seed %llu, 3x8 views + 4 outliers, exhaustive_threshold %d: maa %.4f, "
                          "cl %.4f, score %.4f in %.1f s (need maa, cl >= 0.9 and < %.0f s)",
                          static_cast<unsigned long long>(kSynthSeed), kE2eExhaustiveThreshold,
                          e2e.maa, e2e.cl, e2e.score, run1.seconds, kE2eSeconds)
                 : "run failed: " + run1.error);

  // Determinism: the same command again, cold cache, compared file by file.
  const RunOutcome run2 = CliRun(manifest, dir / "run2", exhaustive, dir.path());
  std::string det_detail = "second run failed: " + run2.error;
  bool det_pass = false;
  if (run1.ok && run2.ok) {
    const auto a = Snapshot(dir / "run1");
    const auto b = Snapshot(dir / "run2");
    std::vector<std::string> differing;
    std::set<std::string> names;
    for (const auto& [k, v] : a) names.insert(k);
    for (const auto& [k, v] : b) names.insert(k);
    for (const auto& name : names) {
      auto ia = a.find(name), ib = b.find(name);
      if (ia == a.end() || ib == b.end() || ia->second != ib->second) differing.push_back(name);
    }
    det_pass = differing.empty() && a.size() >= 6;
    det_detail = differing.empty()
                     ? Format("%zu files byte-identical across two runs", a.size())
                     : Format("%zu of %zu files differ, first %s", differing.size(), names.size(),
                              differing.front().c_str());
  }
  Report(det_pass, "determinism", det_detail);

  // Rotation ablation on the same dataset.
  std::vector<bool> turned(synth.scenes, false);
  for (const auto& view : dataset.views) {
    if (view.scene && (view.orientation == Orientation::kR90 || view.orientation == Orientation::kR270)) {
      turned[*view.scene] = true;
    }
  }
  const bool every_scene_turned = std::all_of(turned.begin(), turned.end(), [](bool t) { return t; });
  const RunOutcome plain = CliRun(manifest, dir / "plain", exhaustive + " --rotations 0", dir.path());
  if (run1.ok && plain.ok) {
    const double with = MeanTotal(dir / "run1" / dataset_dir / "matches.jsonl");
    const double without = MeanTotal(dir / "plain" / dataset_dir / "matches.jsonl");
    const EvalReport plain_eval = Evaluate(
        dataset.ground_truth, ReadClustering(dir / "plain" / dataset_dir / "clusters.json"));
    Report(every_scene_turned && with > without && e2e.score >= plain_eval.score, "rotation-ablation",
           Format("every scene has an R90/R270 view: %s; mean pair total %.1f (4 rotations) vs "
                  "%.1f ({R0}); score %.4f vs %.4f",
                  every_scene_turned ? "yes" : "no", with, without, e2e.score, plain_eval.score));
  } else {
    Report(false, "rotation-ablation", "run failed: " + plain.error);
  }

  // Literal pipeline defaults, informational only.
  const RunOutcome literal = CliRun(manifest, dir / "literal", "", dir.path());
  if (literal.ok) {
    const EvalReport r = Evaluate(dataset.ground_truth,
                                  ReadClustering(dir / "literal" / dataset_dir / "clusters.json"));
    std::printf("INFO end-to-end with every pipeline default (20 retrieval pairs): maa %.4f, "
                "cl %.4f, score %.4f in %.1f s\n",
                r.maa, r.cl, r.score, literal.seconds);
  } else {
    std::printf("INFO end-to-end with every pipeline default failed: %s\n", literal.error.c_str());
  }
}

}  // namespace
}  // namespace rotatematch

int main() {
  using namespace rotatematch;
  MetricOracleCriterion();
  WorkedExampleCriterion();
  RotationRoundTripCriterion();
  PairingCountsCriterion();
  GateBoundaryCriterion();
  SyntheticCriteria();
  std::printf("%s: %d criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
