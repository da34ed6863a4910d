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

#ifndef AGGREX_PIPELINE_H_
#define AGGREX_PIPELINE_H_

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "aggrex/aggregate.h"
#include "aggrex/blackbox.h"
#include "aggrex/config.h"
#include "aggrex/data.h"
#include "aggrex/error.h"
#include "aggrex/explainer.h"

namespace aggrex {

// Run directory layout, rooted at output_dir/RunStamp(config).
struct RunPaths {
  std::filesystem::path root;
  std::filesystem::path config;    // config.json
  std::filesystem::path schema;    // schema.json
  std::filesystem::path data;      // data.csv
  std::filesystem::path model;     // model.txt
  std::filesystem::path bundle;    // explainers.json
  std::filesystem::path cells;     // aggregate/
  std::filesystem::path sweep;     // sweep.csv
  std::filesystem::path report;    // report/
  std::filesystem::path manifest;  // manifest.json

  static RunPaths At(const std::filesystem::path& root);
};

RunPaths ResolveRun(const ExperimentConfig& config);

inline constexpr const char* kSweepHeader =
    "K,phi,solver,ip_coverage,ball_coverage,min_fidelity,status,wall_ms,"
    "ball_min_fidelity,nodes";

// The dataset the config describes: synthetic data seeded from the root
// seed, or a CSV file, standardized when requested.
Dataset MakeDataset(const ExperimentConfig& config);

// Writes config.json, schema.json, data.csv and model.txt.
void RunTrain(const ExperimentConfig& config, std::ostream& log);
// Reads the train outputs, writes explainers.json.
void RunExplain(const ExperimentConfig& config, std::ostream& log);

struct AggregateSummary {
  int cells = 0;
  // Cells with K >= 1 whose best aggregate covers nothing.
  int infeasible = 0;
};
// Reads the explain outputs, writes aggregate/<cell>.json and sweep.csv and
// refreshes config.json.
AggregateSummary RunAggregate(const ExperimentConfig& config,
                              std::ostream& log);
// Reads sweep.csv in `run_dir`, writes the series under report/. Throws
// IoError listing the missing inputs.
void RunReport(const std::filesystem::path& run_dir, std::ostream& log);
// train, explain, aggregate and report in order.
AggregateSummary RunSweep(const ExperimentConfig& config, std::ostream& log);

// Lists every file in the run directory with its size and FNV-1a digest.
void WriteManifest(const std::filesystem::path& run_dir);

// Explainer bundle file form.
std::string BundleToText(const FeatureSchema& schema,
                         const std::vector<LocalExplainer>& explainers);
std::vector<LocalExplainer> BundleFromText(const std::string& text);

FeatureSchema LoadSchema(const std::filesystem::path& path);

}  // namespace aggrex

#endif  // AGGREX_PIPELINE_H_
