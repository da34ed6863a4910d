// Copyright 2026 The Aggrex Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AGGREX_CONFIG_H_
#define AGGREX_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "aggrex/data.h"
#include "json.hpp"

namespace aggrex {

inline constexpr const char* kSeedEnvVar = "AGGREX_SEED";

struct ExperimentConfig {
  std::uint64_t seed = 1;

  // "synth" or "csv".
  std::string data_source = "synth";
  std::string data_path;
  std::vector<std::string> binary_features;
  bool standardize = true;

  std::size_t synth_n = 60;
  std::size_t synth_continuous = 10;
  std::size_t synth_binary = 10;
  int synth_classes = 5;
  std::vector<int> synth_relevant = {10, 11, 12};

  int n_trees = 50;

  std::size_t n_samples = 10000;
  std::vector<double> radii = {3.0};

  int bins = 3;
  double eps_mi = 1e-9;
  std::size_t max_selected = 0;
  // Which explainers to train: "filtered", "unfiltered" or "both".
  std::string variant = "filtered";

  int max_depth = 32;
  int min_leaf = 1;

  std::vector<int> budgets = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<double> fidelity_floors = {0.5, 0.7, 0.9};
  // "exact", "greedy" or "both".
  std::string solver = "both";
  // Which explainers form the candidate pool: "filtered" or "unfiltered".
  std::string pool = "filtered";
  std::uint64_t node_limit = 0;

  std::string output_dir = "runs";
  // Wall-clock columns are left empty unless set, which keeps outputs
  // byte-identical across runs.
  bool timing = false;

  bool operator==(const ExperimentConfig&) const = default;
};

// Nested form:
//   {seed, data{source, path, binary_features, standardize},
//    synth{n, continuous, binary, classes, relevant}, blackbox{n_trees},
//    sampler{n_samples, radii}, fffs{bins, eps_mi, max_selected, variant},
//    explainer{max_depth, min_leaf},
//    aggregate{budgets, fidelity_floors, solver, pool, node_limit},
//    output_dir, timing}
nlohmann::json ConfigToJson(const ExperimentConfig& config);
// Missing keys keep their defaults; unknown keys and wrong types throw
// ConfigError. The result is validated.
ExperimentConfig ConfigFromJson(const nlohmann::json& json);
ExperimentConfig LoadConfig(const std::filesystem::path& path);
void SaveConfig(const ExperimentConfig& config,
                const std::filesystem::path& path);

// Throws ConfigError naming the first bad field.
void ValidateConfig(const ExperimentConfig& config);

// Dotted paths of every leaf key ("sampler.radii", "seed", ...), in the
// order ConfigToJson emits them.
std::vector<std::string> ConfigKeys();
// Sets one dotted key from text. Lists are comma separated. Throws
// ConfigError. Does not validate.
void SetConfigValue(nlohmann::json& json, const std::string& key,
                    const std::string& text);

// Applies AGGREX_SEED when set. Throws ConfigError on a malformed value.
void ApplySeedOverride(ExperimentConfig& config);

// "run-<seed>-<8 hex digits>", a digest of the settings that shape the
// trained artifacts (everything except aggregate, output_dir and timing).
std::string RunStamp(const ExperimentConfig& config);

}  // namespace aggrex

#endif  // AGGREX_CONFIG_H_
