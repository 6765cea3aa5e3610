// Copyright 2026 The mgkb Authors.
//
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

#ifndef MGKB_PIPELINE_H_
#define MGKB_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mgkb/common.h"

namespace mgkb {
namespace pipeline {

// Stage names in pipeline order; `all` runs them in this order.
const std::vector<std::string> &StageNames();

// Paths are resolved against the config file's directory.
struct PipelineConfig {
  std::string base_dir;
  nlohmann::json raw;  // parsed file with flag overrides applied

  std::uint64_t seed = 1;
  int threads = 1;
  std::string out;

  std::string Path(const std::string &key) const;          // required
  std::optional<std::string> OptionalPath(const std::string &key) const;
  const nlohmann::json &Section(const std::string &name) const;

  // Throws when a referenced file is missing or a parameter is out of range.
  void Validate() const;
};

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> out;
};

PipelineConfig LoadConfig(const std::string &path, const Overrides &overrides = {});

// Summary of one stage run, also written as <out>/<stage>/manifest.json.
struct StageResult {
  std::string stage;
  nlohmann::json manifest;
  Warnings warnings;
};

// Runs one stage. Throws when an upstream artifact is missing or stale.
StageResult RunStage(const std::string &stage, const PipelineConfig &config);
std::vector<StageResult> RunAll(const PipelineConfig &config);

// Artifact written by build-kb.
std::string GraphPath(const PipelineConfig &config);

}  // namespace pipeline
}  // namespace mgkb

#endif  // MGKB_PIPELINE_H_
