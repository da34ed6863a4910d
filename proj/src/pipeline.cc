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

#include "aggrex/pipeline.h"

#include <algorithm>
#include <exception>
#include <map>
#include <sstream>
#include <utility>

#include "aggrex/io.h"
#include "aggrex/rng.h"

namespace aggrex {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Sub-stream tags for the root seed.
constexpr std::uint64_t kDataStream = 1;
constexpr std::uint64_t kForestStream = 2;
constexpr std::uint64_t kExplainStream = 3;

constexpr const char* kBundleFormat = "aggrex-explainers v1";
constexpr const char* kManifestFormat = "aggrex-manifest v1";

void Require(const std::vector<fs::path>& paths) {
  std::string missing;
  for (const fs::path& p : paths) {
    if (!fs::exists(p)) missing += (missing.empty() ? "" : ", ") + p.string();
  }
  if (!missing.empty()) throw IoError("missing inputs: " + missing);
}

json ParseJsonFile(const fs::path& path) {
  json j = json::parse(ReadFile(path), nullptr, false);
  if (j.is_discarded())
    throw ParseError(path.string() + " is not valid JSON", 0);
  return j;
}

std::string OptionalNumber(const std::optional<double>& value) {
  return value ? FormatDouble(*value) : std::string();
}

std::string CellName(double phi, int k, const std::string& solver) {
  return "phi" + FormatDouble(phi) + "_K" + std::to_string(k) + "_" + solver;
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream in(line);
  std::string field;
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double Median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid]
                           : 0.5 * (values[mid - 1] + values[mid]);
}

struct Cell {
  double phi;
  int budget;
  std::string solver;
  AggregateSolution solution;
};

// The copy inside a run directory leaves out output_dir so two runs of one
// config in different places are byte-identical.
void SaveRunConfig(const ExperimentConfig& config, const fs::path& path) {
  json j = ConfigToJson(config);
  j.erase("output_dir");
  WriteFileAtomic(path, j.dump(2) + "\n");
}

}  // namespace

RunPaths RunPaths::At(const fs::path& root) {
  RunPaths p;
  p.root = root;
  p.config = root / "config.json";
  p.schema = root / "schema.json";
  p.data = root / "data.csv";
  p.model = root / "model.txt";
  p.bundle = root / "explainers.json";
  p.cells = root / "aggregate";
  p.sweep = root / "sweep.csv";
  p.report = root / "report";
  p.manifest = root / "manifest.json";
  return p;
}

RunPaths ResolveRun(const ExperimentConfig& config) {
  return RunPaths::At(fs::path(config.output_dir) / RunStamp(config));
}

Dataset MakeDataset(const ExperimentConfig& config) {
  Dataset dataset = [&] {
    if (config.data_source == "csv") {
      const FeatureSchema schema =
          InferSchema(config.data_path, config.binary_features);
      return LoadDataset(config.data_path, schema);
    }
    SynthSpec spec;
    spec.seed = DeriveSeed(config.seed, kDataStream);
    spec.n = config.synth_n;
    spec.m_cont = config.synth_continuous;
    spec.m_bin = config.synth_binary;
    spec.classes = config.synth_classes;
    spec.relevant = config.synth_relevant;
    return SynthMulticlass(spec);
  }();
  return config.standardize ? Standardize(dataset) : dataset;
}

FeatureSchema LoadSchema(const fs::path& path) {
  const json j = ParseJsonFile(path);
  try {
    FeatureSchema schema =
        FeatureSchema::FromKindString(j.at("kinds").get<std::string>());
    schema.names = j.at("names").get<std::vector<std::string>>();
    schema.Validate();
    return schema;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

void RunTrain(const ExperimentConfig& config, std::ostream& log) {
  const RunPaths paths = ResolveRun(config);
  const Dataset dataset = MakeDataset(config);
  const BlackBoxModel model = TrainBaggedForest(
      dataset, config.n_trees, DeriveSeed(config.seed, kForestStream));

  SaveRunConfig(config, paths.config);
  const json schema = {{"names", dataset.schema().names},
                       {"kinds", dataset.schema().KindString()}};
  WriteFileAtomic(paths.schema, schema.dump(2) + "\n");
  WriteDataset(dataset, paths.data);
  model.Save(paths.model);
  WriteManifest(paths.root);

  const std::vector<int> predicted = model.PredictAll(dataset.x());
  int hits = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    hits += predicted[i] == dataset.labels()[i];
  }
  for (const std::string& w : dataset.warnings())
    log << "warning: " << w << "\n";
  log << "train: " << dataset.rows() << " points, " << dataset.cols()
      << " features, " << config.n_trees << " trees, training accuracy "
      << FormatDouble(static_cast<double>(hits) / dataset.rows()) << "\n";
  log << "run directory: " << paths.root.string() << "\n";
}

std::string BundleToText(const FeatureSchema& schema,
                         const std::vector<LocalExplainer>& explainers) {
  json j;
  j["format"] = kBundleFormat;
  j["schema"] = {{"names", schema.names}, {"kinds", schema.KindString()}};
  json records = json::array();
  for (const LocalExplainer& e : explainers) {
    records.push_back(ExplainerToJson(e));
  }
  j["explainers"] = std::move(records);
  return j.dump(1) + "\n";
}

std::vector<LocalExplainer> BundleFromText(const std::string& text) {
  const json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object() ||
      j.value("format", "") != kBundleFormat) {
    throw ParseError("not an explainer bundle", 0);
  }
  std::vector<LocalExplainer> explainers;
  for (const json& record : j.at("explainers")) {
    explainers.push_back(ExplainerFromJson(record));
  }
  return explainers;
}

void RunExplain(const ExperimentConfig& config, std::ostream& log) {
  const RunPaths paths = ResolveRun(config);
  Require({paths.schema, paths.data, paths.model});
  const FeatureSchema schema = LoadSchema(paths.schema);
  const Dataset dataset = LoadDataset(paths.data, schema);
  const BlackBoxModel model = BlackBoxModel::Load(paths.model);

  ExplainJob job;
  job.radii = config.radii;
  job.filtered = config.variant != "unfiltered";
  job.unfiltered = config.variant != "filtered";
  job.root_seed = DeriveSeed(config.seed, kExplainStream);
  job.params.samples = config.n_samples;
  job.params.fffs.bins = config.bins;
  job.params.fffs.eps_mi = config.eps_mi;
  job.params.fffs.max_selected = config.max_selected;
  job.params.tree =
      TreeParams{config.max_depth, static_cast<std::size_t>(config.min_leaf)};
  const std::vector<LocalExplainer> explainers =
      TrainExplainersParallel(model, dataset, job);

  WriteFileAtomic(paths.bundle, BundleToText(schema, explainers));
  WriteManifest(paths.root);

  std::vector<double> sizes;
  std::vector<double> leaves;
  std::vector<double> fidelity;
  for (const LocalExplainer& e : explainers) {
    if (e.filtered) sizes.push_back(e.selected_features.size());
    leaves.push_back(e.leaf_count());
    fidelity.push_back(e.train_fidelity);
  }
  log << "explain: " << explainers.size() << " explainers";
  if (!sizes.empty()) {
    log << ", median selected features " << FormatDouble(Median(sizes));
  }
  log << ", median leaf count " << FormatDouble(Median(leaves))
      << ", median train fidelity " << FormatDouble(Median(fidelity)) << "\n";
}

AggregateSummary RunAggregate(const ExperimentConfig& config,
                              std::ostream& log) {
  const RunPaths paths = ResolveRun(config);
  Require({paths.schema, paths.data, paths.model, paths.bundle});
  const FeatureSchema schema = LoadSchema(paths.schema);
  const Dataset dataset = LoadDataset(paths.data, schema);
  const BlackBoxModel model = BlackBoxModel::Load(paths.model);
  const std::vector<LocalExplainer> all =
      BundleFromText(ReadFile(paths.bundle));

  const bool want_filtered = config.pool == "filtered";
  std::vector<LocalExplainer> members;
  for (const LocalExplainer& e : all) {
    if (e.filtered == want_filtered) members.push_back(e);
  }
  if (members.empty()) {
    throw Error("explainer bundle holds no " + config.pool + " explainers");
  }
  const CandidatePool pool = BuildPoolParallel(dataset, members, model);

  std::vector<int> budgets = config.budgets;
  std::sort(budgets.begin(), budgets.end());
  std::vector<std::string> solvers;
  if (config.solver != "greedy") solvers.push_back("exact");
  if (config.solver != "exact") solvers.push_back("greedy");
  std::vector<Cell> cells;
  for (double phi : config.fidelity_floors) {
    for (const std::string& solver : solvers) {
      for (int k : budgets) cells.push_back({phi, k, solver, {}});
    }
  }

  std::exception_ptr failure;
  const long count = static_cast<long>(cells.size());
#pragma omp parallel for schedule(dynamic)
  for (long c = 0; c < count; ++c) {
    try {
      Cell& cell = cells[c];
      if (cell.solver == "exact") {
        SolverOptions options;
        options.node_limit = config.node_limit;
        cell.solution =
            SolveExact(BuildIp(pool, cell.budget, cell.phi), pool, options);
      } else {
        cell.solution = SolveGreedy(pool, cell.budget, cell.phi);
      }
      const auto issues =
          VerifySolution(pool, cell.budget, cell.phi, cell.solution);
      if (!issues.empty()) {
        throw Error("solution for " +
                    CellName(cell.phi, cell.budget, cell.solver) +
                    " fails verification: " + issues.front());
      }
      if (cell.budget >= 1 && cell.solution.ip_coverage == 0) {
        cell.solution.status = SolveStatus::kInfeasible;
      }
    } catch (...) {
#pragma omp critical(aggrex_cell_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::error_code ec;
  fs::remove_all(paths.cells, ec);
  SaveRunConfig(config, paths.config);
  AggregateSummary summary;
  std::ostringstream sweep;
  sweep << kSweepHeader << "\n";
  for (const Cell& cell : cells) {
    const AggregateSolution& s = cell.solution;
    json out = SolutionToJson(s, config.timing);
    out["K"] = cell.budget;
    out["phi"] = cell.phi;
    out["solver"] = cell.solver;
    out["pool"] = config.pool;
    json chosen = json::array();
    for (int i : s.selected) {
      chosen.push_back({{"candidate", i},
                        {"center_index", pool.centers[i]},
                        {"radius", pool.radii[i]}});
    }
    out["selected_explainers"] = std::move(chosen);
    WriteFileAtomic(
        paths.cells / (CellName(cell.phi, cell.budget, cell.solver) + ".json"),
        out.dump(1) + "\n");

    sweep << cell.budget << ',' << FormatDouble(cell.phi) << ',' << cell.solver
          << ',' << s.ip_coverage << ',' << s.ball_coverage << ','
          << OptionalNumber(s.claimed_min_fidelity) << ','
          << StatusName(s.status) << ','
          << (config.timing ? FormatDouble(s.wall_time_ms) : std::string())
          << ',' << OptionalNumber(s.ball_min_fidelity) << ','
          << s.nodes_explored << "\n";
    ++summary.cells;
    summary.infeasible += s.status == SolveStatus::kInfeasible;
  }
  WriteFileAtomic(paths.sweep, sweep.str());
  WriteManifest(paths.root);
  log << "aggregate: " << pool.candidates << " candidates, " << summary.cells
      << " cells";
  if (summary.infeasible > 0)
    log << ", " << summary.infeasible << " infeasible";
  log << "\n";
  return summary;
}

void RunReport(const fs::path& run_dir, std::ostream& log) {
  const RunPaths paths = RunPaths::At(run_dir);
  Require({paths.sweep});
  std::istringstream in(ReadFile(paths.sweep));
  std::string line;
  if (!std::getline(in, line) || line != kSweepHeader) {
    throw ParseError(paths.sweep.string() + ": unexpected header", 1);
  }
  struct Point {
    int k;
    std::vector<std::string> fields;
  };
  // (solver, phi) -> points; phi kept as text so output bytes follow input.
  std::map<std::pair<std::string, double>,
           std::pair<std::string, std::vector<Point>>>
      series;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const std::vector<std::string> f = SplitCsv(line);
    if (f.size() != 10) throw ParseError("sweep.csv: expected 10 fields", row);
    int k;
    double phi;
    try {
      k = std::stoi(f[0]);
      phi = std::stod(f[1]);
    } catch (const std::exception&) {
      throw ParseError("sweep.csv: bad K or phi", row);
    }
    auto& entry = series[{f[2], phi}];
    entry.first = f[1];
    entry.second.push_back({k, f});
  }
  if (series.empty()) throw ParseError("sweep.csv has no rows", 0);

  std::error_code ec;
  fs::remove_all(paths.report, ec);
  std::ostringstream index;
  index << "figure,solver,phi,file,points\n";
  int files = 0;
  for (auto& [key, entry] : series) {
    auto& points = entry.second;
    std::sort(points.begin(), points.end(),
              [](const Point& a, const Point& b) { return a.k < b.k; });
    for (std::size_t p = 1; p < points.size(); ++p) {
      if (points[p].k == points[p - 1].k) {
        throw ParseError("sweep.csv repeats K=" + std::to_string(points[p].k) +
                             " for " + key.first + " phi " + entry.first,
                         0);
      }
    }
    const std::string suffix = key.first + "__phi" + entry.first + ".csv";
    std::ostringstream coverage;
    std::ostringstream fidelity;
    coverage << "K,ip_coverage,ball_coverage\n";
    fidelity << "K,min_fidelity,ball_min_fidelity\n";
    for (const Point& p : points) {
      coverage << p.k << ',' << p.fields[3] << ',' << p.fields[4] << "\n";
      fidelity << p.k << ',' << p.fields[5] << ',' << p.fields[8] << "\n";
    }
    WriteFileAtomic(paths.report / ("coverage__" + suffix), coverage.str());
    WriteFileAtomic(paths.report / ("fidelity__" + suffix), fidelity.str());
    index << "coverage," << key.first << ',' << entry.first << ",coverage__"
          << suffix << ',' << points.size() << "\n";
    index << "fidelity," << key.first << ',' << entry.first << ",fidelity__"
          << suffix << ',' << points.size() << "\n";
    files += 2;
  }
  WriteFileAtomic(paths.report / "series.csv", index.str());

  std::ostringstream settings;
  settings << "setting,value\n";
  if (fs::exists(paths.config)) {
    const json config = ParseJsonFile(paths.config);
    const json data = config.value("data", json::object());
    settings << "data.source," << data.value("source", "") << "\n"
             << "data.standardize,"
             << (data.value("standardize", false) ? "true" : "false") << "\n";
  }
  settings << "ip_coverage,points claimed through z in the integer program\n"
           << "ball_coverage,points inside any selected ball\n";
  WriteFileAtomic(paths.report / "settings.csv", settings.str());
  WriteManifest(paths.root);
  log << "report: " << files << " series written to " << paths.report.string()
      << "\n";
}

AggregateSummary RunSweep(const ExperimentConfig& config, std::ostream& log) {
  RunTrain(config, log);
  RunExplain(config, log);
  AggregateSummary summary = RunAggregate(config, log);
  RunReport(ResolveRun(config).root, log);
  return summary;
}

void WriteManifest(const fs::path& run_dir) {
  std::vector<std::pair<std::string, fs::path>> files;
  for (const auto& entry : fs::recursive_directory_iterator(run_dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string rel =
        entry.path().lexically_relative(run_dir).generic_string();
    if (rel == "manifest.json" || rel.find(".tmp.") != std::string::npos) {
      continue;
    }
    files.emplace_back(rel, entry.path());
  }
  std::sort(files.begin(), files.end());
  json listing = json::array();
  for (const auto& [rel, path] : files) {
    const std::string bytes = ReadFile(path);
    listing.push_back({{"path", rel},
                       {"bytes", bytes.size()},
                       {"fnv1a64", HexDigest(Fnv1a64(bytes))}});
  }
  json manifest;
  manifest["format"] = kManifestFormat;
  fs::path name = run_dir.lexically_normal();
  if (name.filename().empty()) name = name.parent_path();
  manifest["run"] = name.filename().string();
  manifest["files"] = std::move(listing);
  WriteFileAtomic(run_dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace aggrex
