// Copyright 2026 The fusebeam Authors.
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

#ifndef FUSEBEAM_TOOLS_RUN_CONFIG_H_
#define FUSEBEAM_TOOLS_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fusebeam/decode/corpus.h"
#include "fusebeam/decode/fusion.h"
#include "fusebeam/diversity/teacher_forcing.h"
#include "fusebeam/frontend/frontend.h"

#include "json.hpp"

namespace fusebeam::cli {

struct ModelEntry {
  std::string name;
  std::string path;
  FrontendConfig frontend;
  std::string stats_path;  // empty: no normalization
  std::optional<double> dev_error;
};

enum class AlphaMode { kUniform, kValidationWeighted, kExplicit };

struct RunConfig {
  std::string manifest;
  std::vector<ModelEntry> models;
  AlphaMode alpha_mode = AlphaMode::kUniform;
  ScorePairs alpha;  // kExplicit only
  double ctc_weight = 0.3;
  std::string lm_path;
  std::optional<double> lm_weight;  // empty: EnsembleLmWeight
  DecodeConfig decode;
  ScorerMix mix;            // teacher forcing
  std::vector<int> order;   // diversity column order, empty: identity
  std::string out_dir;
  std::uint64_t seed = 0;
};

// Relative paths are resolved against `base_dir`. Throws ConfigError naming
// the offending field.
RunConfig RunConfigFromJson(const nlohmann::json& j, const std::filesystem::path& base_dir);

// Reads `path` when non-empty; an empty object otherwise.
nlohmann::json LoadJsonFile(const std::string& path);

// Parses "name:frontend:path[:stats]".
nlohmann::json ModelFlagToJson(const std::string& flag);

// Parses "uniform", "validation_weighted" or a JSON matrix.
nlohmann::json AlphaFlagToJson(const std::string& flag);

// Parses "auto" or a number.
nlohmann::json LmWeightFlagToJson(const std::string& flag);

FusionWeights ResolveWeights(const RunConfig& cfg, int num_models);

// Every setting with defaults materialized.
nlohmann::ordered_json ResolvedConfigJson(const RunConfig& cfg, const FusionWeights& weights);

std::vector<LoadedModel> LoadModels(const RunConfig& cfg);

// Compact rendering with up to ten significant digits.
std::string FormatNumber(double v);
std::string FormatAlpha(const ScorePairs& alpha);

}  // namespace fusebeam::cli

#endif  // FUSEBEAM_TOOLS_RUN_CONFIG_H_
