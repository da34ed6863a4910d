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

#include "aggrex/explainer.h"

#include <numeric>
#include <sstream>

#include "aggrex/error.h"
#include "aggrex/rng.h"

namespace aggrex {
namespace {

double TrainFidelity(const DecisionTree& tree, const SampleSet& samples) {
  std::size_t agree = 0;
  for (std::size_t i = 0; i < samples.points.rows(); ++i) {
    if (tree.Predict(samples.points.Row(i)) == samples.labels[i]) ++agree;
  }
  return static_cast<double>(agree) /
         static_cast<double>(samples.points.rows());
}

struct Task {
  std::size_t radius_index;
  std::size_t center;
};

void RunTask(const BlackBoxModel& model, const Dataset& dataset,
             const ExplainJob& job, const Task& task,
             std::vector<LocalExplainer>& out, std::size_t slot) {
  const double radius = job.radii[task.radius_index];
  SampleSet samples = SampleBall(
      dataset.Row(task.center), radius, job.params.samples, dataset.schema(),
      DeriveSeed(job.root_seed, task.center, task.radius_index));
  samples.labels = model.PredictAll(samples.points, ExecPolicy::kSerial);
  // Nested regions run serially inside the parallel kernel anyway; pinning
  // the policy keeps both kernels on the same code path.
  ExplainerParams params = job.params;
  params.fffs.policy = ExecPolicy::kSerial;
  for (bool filtered : {false, true}) {
    if (filtered ? !job.filtered : !job.unfiltered) continue;
    LocalExplainer e =
        FitSurrogate(samples, dataset.schema(), filtered, params);
    e.center_index = task.center;
    out[slot++] = std::move(e);
  }
}

std::vector<Task> Tasks(const Dataset& dataset, const ExplainJob& job) {
  if (job.radii.empty()) throw Error("explain: no radii given");
  if (!job.filtered && !job.unfiltered) {
    throw Error("explain: neither filtered nor unfiltered requested");
  }
  std::vector<Task> tasks;
  for (std::size_t r = 0; r < job.radii.size(); ++r) {
    for (std::size_t c = 0; c < dataset.rows(); ++c) tasks.push_back({r, c});
  }
  return tasks;
}

std::size_t VariantCount(const ExplainJob& job) {
  return static_cast<std::size_t>(job.filtered) +
         static_cast<std::size_t>(job.unfiltered);
}

}  // namespace

LocalExplainer FitSurrogate(const SampleSet& samples,
                            const FeatureSchema& schema, bool filtered,
                            const ExplainerParams& params) {
  if (samples.points.rows() < 1) throw Error("surrogate needs samples");
  if (samples.labels.size() != samples.points.rows()) {
    throw Error("surrogate samples are not labelled");
  }
  LocalExplainer e;
  e.center = samples.center;
  e.radius = samples.radius;
  e.filtered = filtered;
  if (filtered) {
    e.selected_features =
        Fffs(samples.points, samples.labels, schema, params.fffs);
  } else {
    e.selected_features.resize(schema.size());
    std::iota(e.selected_features.begin(), e.selected_features.end(), 0);
  }
  if (e.selected_features.empty()) {
    e.tree = DecisionTree::Leaf(MajorityVote(samples.labels));
  } else {
    e.tree = FitTree(samples.points, samples.labels, e.selected_features,
                     params.tree);
  }
  e.train_fidelity = TrainFidelity(e.tree, samples);
  return e;
}

LocalExplainer TrainLocalExplainer(const BlackBoxModel& model,
                                   std::span<const double> center,
                                   double radius, bool filtered,
                                   std::uint64_t seed,
                                   const ExplainerParams& params,
                                   std::size_t center_index) {
  if (params.samples < 2) throw Error("explainer needs at least 2 samples");
  SampleSet samples =
      SampleBall(center, radius, params.samples, model.schema(), seed);
  samples.labels = model.PredictAll(samples.points);
  LocalExplainer e = FitSurrogate(samples, model.schema(), filtered, params);
  e.center_index = center_index;
  return e;
}

double LocalFidelity(const LocalExplainer& explainer,
                     const BlackBoxModel& model, MatrixView points) {
  if (points.rows() == 0) throw Error("fidelity over an empty point set");
  std::size_t agree = 0;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    if (explainer.Predict(points.Row(i)) == model.Predict(points.Row(i))) {
      ++agree;
    }
  }
  return static_cast<double>(agree) / static_cast<double>(points.rows());
}

std::vector<LocalExplainer> TrainExplainersSerial(const BlackBoxModel& model,
                                                  const Dataset& dataset,
                                                  const ExplainJob& job) {
  const auto tasks = Tasks(dataset, job);
  const std::size_t per_task = VariantCount(job);
  std::vector<LocalExplainer> out(tasks.size() * per_task);
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    RunTask(model, dataset, job, tasks[t], out, t * per_task);
  }
  return out;
}

std::vector<LocalExplainer> TrainExplainersParallel(const BlackBoxModel& model,
                                                    const Dataset& dataset,
                                                    const ExplainJob& job) {
  const auto tasks = Tasks(dataset, job);
  const std::size_t per_task = VariantCount(job);
  std::vector<LocalExplainer> out(tasks.size() * per_task);
  const auto count = static_cast<std::int64_t>(tasks.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t t = 0; t < count; ++t) {
    try {
      RunTask(model, dataset, job, tasks[t], out,
              static_cast<std::size_t>(t) * per_task);
    } catch (...) {
#pragma omp critical(aggrex_explain_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

nlohmann::json ExplainerToJson(const LocalExplainer& e) {
  return {{"center_index", e.center_index},
          {"center", e.center},
          {"radius", e.radius},
          {"filtered", e.filtered},
          {"selected_features", e.selected_features},
          {"leaf_count", e.leaf_count()},
          {"train_fidelity", e.train_fidelity},
          {"tree", e.tree.Records()}};
}

LocalExplainer ExplainerFromJson(const nlohmann::json& json) {
  try {
    LocalExplainer e;
    e.center_index = json.at("center_index").get<std::size_t>();
    e.center = json.at("center").get<std::vector<double>>();
    e.radius = json.at("radius").get<double>();
    e.filtered = json.at("filtered").get<bool>();
    e.selected_features = json.at("selected_features").get<std::vector<int>>();
    e.train_fidelity = json.at("train_fidelity").get<double>();
    e.tree = DecisionTree::FromRecords(
        json.at("tree").get<std::vector<std::string>>());
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("explainer record: ") + ex.what(), 0);
  }
}

std::string ExplainerToRules(const LocalExplainer& e,
                             const FeatureSchema& schema) {
  std::ostringstream out;
  out << "# explainer center=" << e.center_index
      << " radius=" << FormatDouble(e.radius)
      << (e.filtered ? " filtered" : " unfiltered") << " features=[";
  for (std::size_t k = 0; k < e.selected_features.size(); ++k) {
    const int f = e.selected_features[k];
    out << (k ? "," : "")
        << (static_cast<std::size_t>(f) < schema.size() ? schema.names[f]
                                                        : std::to_string(f));
  }
  out << "] leaves=" << e.leaf_count()
      << " train_fidelity=" << FormatDouble(e.train_fidelity) << '\n';
  out << e.tree.ToRules(schema.names);
  return out.str();
}

}  // namespace aggrex
