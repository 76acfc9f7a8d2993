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

#include <span>
#include <string>
#include <vector>

#include "rotatematch/types.hpp"

namespace rotatematch {

// Connected components of the graph whose edges are the kept pairs.
// Components of two or more images become clusters, ordered by size
// (descending) then smallest member id; isolated images are outliers.
// Throws kUnknownId when a result names an id outside all_ids.
Clustering BuildClusters(std::span<const std::string> all_ids,
                         std::span<const PairMatchResult> results);

}  // namespace rotatematch
