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

// Serial reference kernels against their OpenMP versions.

#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "aggrex/aggregate.h"
#include "aggrex/blackbox.h"
#include "aggrex/explainer.h"
#include "aggrex/fffs.h"

namespace aggrex {
namespace {

const Dataset& Data() {
  static const Dataset d = [] {
    SynthSpec spec;
    spec.n = 60;
    return SynthMulticlass(spec);
  }();
  return d;
}

const BlackBoxModel& Model() {
  static const BlackBoxModel m = TrainBaggedForest(Data(), kDefaultForestSize);
  return m;
}

const Dataset& Probe() {
  static const Dataset d = [] {
    SynthSpec spec;
    spec.seed = 2;
    spec.n = 20000;
    return SynthMulticlass(spec);
  }();
  return d;
}

void BM_PredictAll(benchmark::State& state, ExecPolicy policy) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(Model().PredictAll(Probe().x(), policy));
  }
  state.SetItemsProcessed(state.iterations() * Probe().rows());
}
BENCHMARK_CAPTURE(BM_PredictAll, serial, ExecPolicy::kSerial);
BENCHMARK_CAPTURE(BM_PredictAll, parallel, ExecPolicy::kParallel);

void BM_ScoreFeatures(benchmark::State& state, ExecPolicy policy) {
  const BinAssignment bins = BuildHistograms(Probe().x(), Probe().schema());
  const EncodedLabels y = EncodeLabels(Probe().labels());
  std::vector<int> all(Probe().cols());
  std::iota(all.begin(), all.end(), 0);
  const PartitionLeaves leaves = RootLeaves(Probe().rows());
  for (auto _ : state) {
    benchmark::DoNotOptimize(policy == ExecPolicy::kSerial
                                 ? ScoreFeaturesSerial(all, y, leaves, bins)
                                 : ScoreFeaturesParallel(all, y, leaves, bins));
  }
}
BENCHMARK_CAPTURE(BM_ScoreFeatures, serial, ExecPolicy::kSerial);
BENCHMARK_CAPTURE(BM_ScoreFeatures, parallel, ExecPolicy::kParallel);

void BM_TrainExplainers(benchmark::State& state, ExecPolicy policy) {
  ExplainJob job;
  job.radii = {3.0};
  job.params.samples = 2000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        policy == ExecPolicy::kSerial
            ? TrainExplainersSerial(Model(), Data(), job)
            : TrainExplainersParallel(Model(), Data(), job));
  }
}
BENCHMARK_CAPTURE(BM_TrainExplainers, serial, ExecPolicy::kSerial)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_TrainExplainers, parallel, ExecPolicy::kParallel)
    ->Unit(benchmark::kMillisecond);

void BM_BuildPool(benchmark::State& state, ExecPolicy policy) {
  ExplainJob job;
  job.radii = {3.0, 7.0};
  job.params.samples = 1000;
  static const std::vector<LocalExplainer> explainers =
      TrainExplainersParallel(Model(), Data(), job);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        policy == ExecPolicy::kSerial
            ? BuildPoolSerial(Data(), explainers, Model())
            : BuildPoolParallel(Data(), explainers, Model()));
  }
}
BENCHMARK_CAPTURE(BM_BuildPool, serial, ExecPolicy::kSerial);
BENCHMARK_CAPTURE(BM_BuildPool, parallel, ExecPolicy::kParallel);

}  // namespace
}  // namespace aggrex

BENCHMARK_MAIN();
