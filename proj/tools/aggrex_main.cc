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

// Command-line driver: train, explain, aggregate, sweep, report.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aggrex/config.h"
#include "aggrex/error.h"
#include "aggrex/pipeline.h"
#include "json.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;

// "sampler.n_samples" -> "--sampler-n-samples"
std::string FlagFor(const std::string& key) {
  std::string flag = key;
  std::replace(flag.begin(), flag.end(), '.', '-');
  std::replace(flag.begin(), flag.end(), '_', '-');
  return "--" + flag;
}

struct CommandOptions {
  std::string config_path;
  std::string run_dir;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
};

void AddConfigOptions(CLI::App* command, CommandOptions& opts) {
  command->add_option("-c,--config", opts.config_path, "JSON experiment config")
      ->check(CLI::ExistingFile);
  const nlohmann::json defaults =
      aggrex::ConfigToJson(aggrex::ExperimentConfig{});
  for (const std::string& key : aggrex::ConfigKeys()) {
    std::string pointer = "/" + key;
    std::replace(pointer.begin(), pointer.end(), '.', '/');
    const bool list =
        defaults.at(nlohmann::json::json_pointer(pointer)).is_array();
    opts.options[key] = command->add_option(
        FlagFor(key), opts.values[key],
        "config key '" + key + "'" + (list ? ", comma-separated list" : ""));
  }
}

aggrex::ExperimentConfig ResolveConfig(const CommandOptions& opts) {
  nlohmann::json json =
      opts.config_path.empty()
          ? aggrex::ConfigToJson(aggrex::ExperimentConfig{})
          : aggrex::ConfigToJson(aggrex::LoadConfig(opts.config_path));
  aggrex::ExperimentConfig from_file = aggrex::ConfigFromJson(json);
  aggrex::ApplySeedOverride(from_file);
  json = aggrex::ConfigToJson(from_file);
  for (const auto& [key, option] : opts.options) {
    if (option->count() > 0) {
      aggrex::SetConfigValue(json, key, opts.values.at(key));
    }
  }
  return aggrex::ConfigFromJson(json);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"aggrex: aggregate local explainers under a coverage budget"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "aggrex 1.0");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"train", "generate or load the dataset and train the black box"},
      {"explain", "train one local explainer per point and radius"},
      {"aggregate", "solve every (K, fidelity floor, solver) cell"},
      {"sweep", "train, explain, aggregate and report in order"},
      {"report", "write plot-ready CSV series from sweep.csv"},
  };
  std::map<std::string, std::unique_ptr<CommandOptions>> options;
  for (const auto& [name, help] : commands) {
    CLI::App* command = app.add_subcommand(name, help);
    auto& opts = options[name];
    opts = std::make_unique<CommandOptions>();
    AddConfigOptions(command, *opts);
    if (name == "report") {
      command->add_option("--run-dir", opts->run_dir,
                          "run directory holding sweep.csv (default: the "
                          "directory the config resolves to)");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  const CommandOptions& opts = *options.at(name);
  try {
    const aggrex::ExperimentConfig config = ResolveConfig(opts);
    if (name == "train") {
      aggrex::RunTrain(config, std::cout);
    } else if (name == "explain") {
      aggrex::RunExplain(config, std::cout);
    } else if (name == "aggregate" || name == "sweep") {
      const aggrex::AggregateSummary summary =
          name == "sweep" ? aggrex::RunSweep(config, std::cout)
                          : aggrex::RunAggregate(config, std::cout);
      if (summary.infeasible > 0) {
        std::cerr << "aggrex: " << summary.infeasible
                  << " cell(s) admit no aggregate that covers a point\n";
        return kExitInfeasible;
      }
    } else if (name == "report") {
      const std::filesystem::path dir =
          opts.run_dir.empty() ? aggrex::ResolveRun(config).root
                               : std::filesystem::path(opts.run_dir);
      aggrex::RunReport(dir, std::cout);
    }
  } catch (const aggrex::ConfigError& e) {
    std::cerr << "aggrex: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "aggrex: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}
