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

#include "rotatematch/manifest.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "rotatematch/error.hpp"
#include "rotatematch/image.hpp"

namespace rotatematch {

namespace fs = std::filesystem;
using nlohmann::json;

DatasetManifest LoadManifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open manifest " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("dataset_id") ||
      !doc["dataset_id"].is_string() || !doc.contains("images") ||
      !doc["images"].is_array()) {
    throw Error(ErrorCode::kParse,
                path.string() + ": expected {\"dataset_id\", \"images\"}");
  }
  DatasetManifest manifest;
  manifest.dataset_id = doc["dataset_id"].get<std::string>();
  const fs::path base = path.parent_path();
  for (const auto& entry : doc["images"]) {
    if (!entry.is_object() || !entry.contains("id") || !entry["id"].is_string() ||
        !entry.contains("path") || !entry["path"].is_string()) {
      throw Error(ErrorCode::kParse,
                  path.string() + ": image entries need string id and path");
    }
    ImageRecord record;
    record.id = entry["id"].get<std::string>();
    fs::path p = fs::u8path(entry["path"].get<std::string>());
    record.path = p.is_absolute() ? p : base / p;
    manifest.images.push_back(std::move(record));
  }
  return manifest;
}

void WriteManifest(const fs::path& path, const DatasetManifest& manifest) {
  json images = json::array();
  const fs::path base = path.parent_path();
  for (const auto& image : manifest.images) {
    fs::path p = image.path;
    if (!base.empty()) {
      auto rel = p.lexically_relative(base);
      if (!rel.empty() && *rel.begin() != "..") p = rel;
    }
    images.push_back({{"id", image.id}, {"path", p.generic_string()}});
  }
  json doc = {{"dataset_id", manifest.dataset_id}, {"images", images}};
  std::ofstream out(path, std::ios::trunc);
  out << doc.dump(2) << "\n";
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

std::vector<std::string> ValidateManifest(const DatasetManifest& manifest) {
  std::vector<std::string> violations;
  std::set<std::string> seen;
  std::set<std::string> reported;
  for (const auto& image : manifest.images) {
    if (image.id.empty()) violations.push_back("empty id: " + image.path.string());
    if (!seen.insert(image.id).second && reported.insert(image.id).second) {
      violations.push_back("duplicate id: " + image.id);
    }
    std::error_code ec;
    if (!fs::is_regular_file(image.path, ec)) {
      violations.push_back("missing file: " + image.path.string());
    }
    if (image.loaded() &&
        image.image.pixels.size() !=
            static_cast<std::size_t>(image.width()) * image.height()) {
      violations.push_back("pixel buffer size mismatch: " + image.id);
    }
  }
  return violations;
}

void LoadPixels(ImageRecord& record) {
  if (!record.loaded()) record.image = ReadPng(record.path);
}

void LoadAllPixels(DatasetManifest& manifest) {
  for (auto& record : manifest.images) LoadPixels(record);
}

}  // namespace rotatematch
