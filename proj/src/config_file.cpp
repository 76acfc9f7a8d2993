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

#include "rotatematch/config_file.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "rotatematch/error.hpp"

namespace rotatematch {
namespace {

std::string_view Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int ParseInt(std::string_view key, std::string_view value) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw Error(ErrorCode::kConfig, std::string(key) + ": expected integer, got '" +
                                        std::string(value) + "'");
  }
  return out;
}

double ParseReal(std::string_view key, std::string_view value) {
  try {
    std::size_t used = 0;
    const std::string s(value);
    const double out = std::stod(s, &used);
    if (used == s.size()) return out;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::kConfig,
              std::string(key) + ": expected number, got '" + std::string(value) + "'");
}

std::string FormatReal(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

std::vector<Orientation> ParseRotations(std::string_view text) {
  std::vector<Orientation> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto token = Trim(text.substr(0, comma));
    if (!token.empty()) {
      try {
        out.push_back(OrientationFromDegrees(ParseInt("rotations", token)));
      } catch (const Error& e) {
        throw Error(ErrorCode::kConfig, std::string("rotations: ") + e.what());
      }
    }
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) throw Error(ErrorCode::kConfig, "rotations: empty list");
  return out;
}

void ApplyConfigValue(PipelineConfig& config, std::string_view key, std::string_view value,
                      const std::filesystem::path& base_dir) {
  auto path_value = [&] {
    std::filesystem::path p{std::string(value)};
    return (p.is_relative() && !base_dir.empty()) ? base_dir / p : p;
  };
  if (key == "exhaustive_threshold") {
    config.exhaustive_threshold = ParseInt(key, value);
  } else if (key == "min_pairs") {
    config.min_pairs = ParseInt(key, value);
  } else if (key == "distance_threshold") {
    if (value == "auto") {
      config.distance_threshold.reset();
    } else {
      config.distance_threshold = ParseReal(key, value);
    }
  } else if (key == "match_gate") {
    config.match_gate = ParseInt(key, value);
  } else if (key == "rotations") {
    config.rotations = ParseRotations(value);
  } else if (key == "max_keypoints_per_orientation") {
    config.max_keypoints_per_orientation = ParseInt(key, value);
  } else if (key == "ratio_test") {
    config.ratio_test = ParseReal(key, value);
  } else if (key == "backend") {
    if (value == "builtin") {
      config.backend = Backend::kBuiltin;
    } else if (value == "external") {
      config.backend = Backend::kExternal;
    } else {
      throw Error(ErrorCode::kConfig, "backend must be builtin or external");
    }
  } else if (key == "global_descriptors") {
    config.global_descriptors = path_value();
  } else if (key == "local_features") {
    config.local_features = path_value();
  } else {
    throw Error(ErrorCode::kConfig, "unknown key '" + std::string(key) + "'");
  }
}

PipelineConfig LoadConfigFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read config file " + path.string());
  PipelineConfig config;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view(line);
    view = Trim(view.substr(0, view.find('#')));
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kConfig,
                  path.string() + ":" + std::to_string(number) + ": expected key = value");
    }
    try {
      ApplyConfigValue(config, Trim(view.substr(0, eq)), Trim(view.substr(eq + 1)),
                       path.parent_path());
    } catch (const Error& e) {
      throw Error(ErrorCode::kConfig,
                  path.string() + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  return config;
}

std::string RenderConfig(const PipelineConfig& config) {
  std::ostringstream out;
  out << "exhaustive_threshold = " << config.exhaustive_threshold << "\n";
  out << "min_pairs = " << config.min_pairs << "\n";
  out << "distance_threshold = "
      << (config.distance_threshold ? FormatReal(*config.distance_threshold) : "auto") << "\n";
  out << "match_gate = " << config.match_gate << "\n";
  out << "rotations = ";
  for (std::size_t i = 0; i < config.rotations.size(); ++i) {
    out << (i ? "," : "") << Degrees(config.rotations[i]);
  }
  out << "\n";
  out << "max_keypoints_per_orientation = " << config.max_keypoints_per_orientation << "\n";
  out << "ratio_test = " << FormatReal(config.ratio_test) << "\n";
  out << "backend = " << (config.backend == Backend::kBuiltin ? "builtin" : "external") << "\n";
  if (!config.global_descriptors.empty()) {
    out << "global_descriptors = " << config.global_descriptors.string() << "\n";
  }
  if (!config.local_features.empty()) {
    out << "local_features = " << config.local_features.string() << "\n";
  }
  return out.str();
}

}  // namespace rotatematch
