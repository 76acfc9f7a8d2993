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

#include "rotatematch/formats.hpp"

#include <algorithm>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "rotatematch/error.hpp"

namespace rotatematch {
namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

std::vector<ordered_json> ReadJsonLines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<ordered_json> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(ordered_json::parse(line));
    } catch (const ordered_json::exception& e) {
      throw Error(ErrorCode::kParse,
                  path.string() + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  return out;
}

ordered_json ReadJson(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  try {
    return ordered_json::parse(in);
  } catch (const ordered_json::exception& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

ordered_json Counts(const OrientationCounts& counts) {
  ordered_json out = ordered_json::object();
  for (Orientation o : kAllOrientations) out[std::to_string(Degrees(o))] = counts[Index(o)];
  return out;
}

OrientationCounts ParseCounts(const ordered_json& j) {
  OrientationCounts out{};
  for (auto it = j.begin(); it != j.end(); ++it) {
    out[Index(OrientationFromDegrees(std::stoi(it.key())))] = it.value().get<int>();
  }
  return out;
}

std::vector<std::string> SortedIds(const ordered_json& j) {
  auto ids = j.get<std::vector<std::string>>();
  std::sort(ids.begin(), ids.end());
  return ids;
}

template <typename Fn>
auto Field(const fs::path& path, Fn&& fn) {
  try {
    return fn();
  } catch (const ordered_json::exception& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

}  // namespace

void WriteTextFile(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

void WritePairs(const fs::path& path, std::span<const CandidatePair> pairs) {
  std::string text;
  for (const auto& p : pairs) {
    ordered_json j;
    j["a"] = p.a;
    j["b"] = p.b;
    j["distance"] = p.distance;
    j["scored"] = p.scored;
    text += j.dump() + "\n";
  }
  WriteTextFile(path, text);
}

std::vector<CandidatePair> ReadPairs(const fs::path& path) {
  std::vector<CandidatePair> out;
  for (const auto& j : ReadJsonLines(path)) {
    out.push_back(Field(path, [&] {
      return CandidatePair::Make(j.at("a").get<std::string>(), j.at("b").get<std::string>(),
                                 j.value("distance", 0.0), j.value("scored", false));
    }));
  }
  return out;
}

void WriteMatches(const fs::path& path, std::span<const PairMatchResult> results) {
  std::string text;
  for (const auto& r : results) {
    ordered_json j;
    j["a"] = r.pair.a;
    j["b"] = r.pair.b;
    j["stage1"] = Counts(r.stage1_counts);
    j["stage2"] = Counts(r.stage2_counts);
    j["total"] = r.total;
    j["kept"] = r.kept;
    ordered_json corr = ordered_json::array();
    for (const auto& c : r.correspondences) corr.push_back({c.xa, c.ya, c.xb, c.yb});
    j["correspondences"] = std::move(corr);
    text += j.dump() + "\n";
  }
  WriteTextFile(path, text);
}

std::vector<PairMatchResult> ReadMatches(const fs::path& path) {
  std::vector<PairMatchResult> out;
  for (const auto& j : ReadJsonLines(path)) {
    out.push_back(Field(path, [&] {
      PairMatchResult r;
      r.pair = CandidatePair::Make(j.at("a").get<std::string>(), j.at("b").get<std::string>());
      r.stage1_counts = ParseCounts(j.at("stage1"));
      r.stage2_counts = ParseCounts(j.at("stage2"));
      r.total = j.at("total").get<int>();
      r.kept = j.at("kept").get<bool>();
      std::uint32_t k = 0;
      for (const auto& c : j.at("correspondences")) {
        const auto v = c.get<std::vector<double>>();
        if (v.size() != 4) throw Error(ErrorCode::kParse, path.string() + ": correspondence arity");
        r.correspondences.push_back({k, k, v[0], v[1], v[2], v[3]});
        ++k;
      }
      return r;
    }));
  }
  return out;
}

void WriteClustering(const fs::path& path, const Clustering& clustering) {
  ordered_json j;
  ordered_json clusters = ordered_json::array();
  for (const auto& c : clustering.clusters) {
    auto ids = c;
    std::sort(ids.begin(), ids.end());
    clusters.push_back(ids);
  }
  auto outliers = clustering.outliers;
  std::sort(outliers.begin(), outliers.end());
  j["clusters"] = std::move(clusters);
  j["outliers"] = outliers;
  WriteTextFile(path, j.dump(2) + "\n");
}

Clustering ReadClustering(const fs::path& path) {
  const auto j = ReadJson(path);
  return Field(path, [&] {
    Clustering out;
    for (const auto& c : j.at("clusters")) out.clusters.push_back(SortedIds(c));
    out.outliers = SortedIds(j.value("outliers", ordered_json::array()));
    return out;
  });
}

void WriteMetrics(const fs::path& path, const AggregateReport& report) {
  ordered_json datasets = ordered_json::array();
  for (const auto& d : report.datasets) {
    ordered_json j;
    j["dataset_id"] = d.dataset_id;
    j["maa"] = d.maa;
    j["cl"] = d.cl;
    j["score"] = d.score;
    j["per_cluster_accuracy"] = d.per_cluster_accuracy;
    datasets.push_back(std::move(j));
  }
  ordered_json aggregate;
  aggregate["maa"] = report.maa;
  aggregate["cl"] = report.cl;
  aggregate["score"] = report.score;
  ordered_json doc;
  doc["datasets"] = std::move(datasets);
  doc["aggregate"] = std::move(aggregate);
  WriteTextFile(path, doc.dump(2) + "\n");
}

}  // namespace rotatematch
