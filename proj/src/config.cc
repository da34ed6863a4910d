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

#include "aggrex/config.h"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>

#include "aggrex/error.h"
#include "aggrex/io.h"

namespace aggrex {
namespace {

using nlohmann::json;

const json& Section(const json& root, const char* name) {
  static const json kEmpty = json::object();
  auto it = root.find(name);
  if (it == root.end()) return kEmpty;
  if (!it->is_object()) {
    throw ConfigError(std::string("config: '") + name + "' must be an object");
  }
  return *it;
}

void CheckKeys(const json& object, const std::string& where,
               std::initializer_list<const char*> allowed) {
  for (auto it = object.begin(); it != object.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) known = known || it.key() == key;
    if (!known) {
      throw ConfigError("config: unknown key '" + where + it.key() + "'");
    }
  }
}

template <typename T>
void Read(const json& object, const char* key, const std::string& where,
          T& out) {
  auto it = object.find(key);
  if (it == object.end()) return;
  try {
    if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
      if (!it->is_number_integer()) throw ConfigError("");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!it->is_number()) throw ConfigError("");
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!it->is_boolean()) throw ConfigError("");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!it->is_string()) throw ConfigError("");
    }
    if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
      if (it->is_number_integer() && it->get<long long>() < 0 &&
          !it->is_number_unsigned()) {
        throw ConfigError("");
      }
    }
    out = it->get<T>();
  } catch (const std::exception&) {
    throw ConfigError("config: '" + where + key + "' has the wrong type");
  }
}

bool ParseDouble(const std::string& text, double* out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, *out);
  return ec == std::errc() && ptr == end;
}

bool ParseInteger(const std::string& text, long long* out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, *out);
  return ec == std::errc() && ptr == end;
}

bool ParseUnsigned(const std::string& text, unsigned long long* out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, *out);
  return ec == std::errc() && ptr == end;
}

json ParseScalar(const std::string& key, const std::string& text,
                 const json& like) {
  if (like.is_boolean()) {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
  } else if (like.is_number_unsigned()) {
    unsigned long long v;
    if (ParseUnsigned(text, &v)) return v;
  } else if (like.is_number_integer()) {
    long long v;
    if (ParseInteger(text, &v)) return v;
  } else if (like.is_number()) {
    double v;
    if (ParseDouble(text, &v)) return v;
  } else {
    return text;
  }
  throw ConfigError("config: bad value '" + text + "' for " + key);
}

void CollectKeys(const json& node, const std::string& prefix,
                 std::vector<std::string>& out) {
  for (auto it = node.begin(); it != node.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object()) {
      CollectKeys(*it, key, out);
    } else {
      out.push_back(key);
    }
  }
}

}  // namespace

json ConfigToJson(const ExperimentConfig& c) {
  json j;
  j["seed"] = c.seed;
  j["data"] = {{"source", c.data_source},
               {"path", c.data_path},
               {"binary_features", c.binary_features},
               {"standardize", c.standardize}};
  j["synth"] = {{"n", c.synth_n},
                {"continuous", c.synth_continuous},
                {"binary", c.synth_binary},
                {"classes", c.synth_classes},
                {"relevant", c.synth_relevant}};
  j["blackbox"] = {{"n_trees", c.n_trees}};
  j["sampler"] = {{"n_samples", c.n_samples}, {"radii", c.radii}};
  j["fffs"] = {{"bins", c.bins},
               {"eps_mi", c.eps_mi},
               {"max_selected", c.max_selected},
               {"variant", c.variant}};
  j["explainer"] = {{"max_depth", c.max_depth}, {"min_leaf", c.min_leaf}};
  j["aggregate"] = {{"budgets", c.budgets},
                    {"fidelity_floors", c.fidelity_floors},
                    {"solver", c.solver},
                    {"pool", c.pool},
                    {"node_limit", c.node_limit}};
  j["output_dir"] = c.output_dir;
  j["timing"] = c.timing;
  return j;
}

ExperimentConfig ConfigFromJson(const json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  CheckKeys(j, "",
            {"seed", "data", "synth", "blackbox", "sampler", "fffs",
             "explainer", "aggregate", "output_dir", "timing"});
  ExperimentConfig c;
  Read(j, "seed", "", c.seed);
  Read(j, "output_dir", "", c.output_dir);
  Read(j, "timing", "", c.timing);

  const json& data = Section(j, "data");
  CheckKeys(data, "data.",
            {"source", "path", "binary_features", "standardize"});
  Read(data, "source", "data.", c.data_source);
  Read(data, "path", "data.", c.data_path);
  Read(data, "binary_features", "data.", c.binary_features);
  Read(data, "standardize", "data.", c.standardize);

  const json& synth = Section(j, "synth");
  CheckKeys(synth, "synth.",
            {"n", "continuous", "binary", "classes", "relevant"});
  Read(synth, "n", "synth.", c.synth_n);
  Read(synth, "continuous", "synth.", c.synth_continuous);
  Read(synth, "binary", "synth.", c.synth_binary);
  Read(synth, "classes", "synth.", c.synth_classes);
  Read(synth, "relevant", "synth.", c.synth_relevant);

  const json& blackbox = Section(j, "blackbox");
  CheckKeys(blackbox, "blackbox.", {"n_trees"});
  Read(blackbox, "n_trees", "blackbox.", c.n_trees);

  const json& sampler = Section(j, "sampler");
  CheckKeys(sampler, "sampler.", {"n_samples", "radii"});
  Read(sampler, "n_samples", "sampler.", c.n_samples);
  Read(sampler, "radii", "sampler.", c.radii);

  const json& fffs = Section(j, "fffs");
  CheckKeys(fffs, "fffs.", {"bins", "eps_mi", "max_selected", "variant"});
  Read(fffs, "bins", "fffs.", c.bins);
  Read(fffs, "eps_mi", "fffs.", c.eps_mi);
  Read(fffs, "max_selected", "fffs.", c.max_selected);
  Read(fffs, "variant", "fffs.", c.variant);

  const json& explainer = Section(j, "explainer");
  CheckKeys(explainer, "explainer.", {"max_depth", "min_leaf"});
  Read(explainer, "max_depth", "explainer.", c.max_depth);
  Read(explainer, "min_leaf", "explainer.", c.min_leaf);

  const json& aggregate = Section(j, "aggregate");
  CheckKeys(aggregate, "aggregate.",
            {"budgets", "fidelity_floors", "solver", "pool", "node_limit"});
  Read(aggregate, "budgets", "aggregate.", c.budgets);
  Read(aggregate, "fidelity_floors", "aggregate.", c.fidelity_floors);
  Read(aggregate, "solver", "aggregate.", c.solver);
  Read(aggregate, "pool", "aggregate.", c.pool);
  Read(aggregate, "node_limit", "aggregate.", c.node_limit);

  ValidateConfig(c);
  return c;
}

void ValidateConfig(const ExperimentConfig& c) {
  auto fail = [](const std::string& message) {
    throw ConfigError("config: " + message);
  };
  if (c.data_source != "synth" && c.data_source != "csv") {
    fail("data.source must be 'synth' or 'csv'");
  }
  if (c.data_source == "csv" && c.data_path.empty()) {
    fail("data.path is required when data.source is 'csv'");
  }
  if (c.data_source == "synth") {
    if (c.synth_n == 0) fail("synth.n must be >= 1");
    if (c.synth_classes < 2) fail("synth.classes must be >= 2");
    const std::size_t m = c.synth_continuous + c.synth_binary;
    if (m == 0) fail("synth needs at least one feature");
    if (c.synth_relevant.empty()) fail("synth.relevant must not be empty");
    std::set<int> seen;
    for (int f : c.synth_relevant) {
      if (f < 0 || static_cast<std::size_t>(f) >= m) {
        fail("synth.relevant index " + std::to_string(f) + " out of range");
      }
      if (!seen.insert(f).second) fail("synth.relevant repeats an index");
    }
  }
  if (c.n_trees < 1) fail("blackbox.n_trees must be >= 1");
  if (c.n_samples < 1) fail("sampler.n_samples must be >= 1");
  if (c.radii.empty()) fail("sampler.radii must not be empty");
  for (double r : c.radii) {
    if (!std::isfinite(r) || r < 0)
      fail("sampler.radii must be finite and >= 0");
  }
  if (c.bins < 2 || c.bins > 255) fail("fffs.bins must lie in [2, 255]");
  if (!std::isfinite(c.eps_mi) || c.eps_mi < 0)
    fail("fffs.eps_mi must be >= 0");
  if (c.variant != "filtered" && c.variant != "unfiltered" &&
      c.variant != "both") {
    fail("fffs.variant must be 'filtered', 'unfiltered' or 'both'");
  }
  if (c.max_depth < 0) fail("explainer.max_depth must be >= 0");
  if (c.min_leaf < 1) fail("explainer.min_leaf must be >= 1");
  if (c.budgets.empty()) fail("aggregate.budgets must not be empty");
  std::set<int> budgets;
  for (int k : c.budgets) {
    if (k < 0) fail("aggregate.budgets must be >= 0");
    if (!budgets.insert(k).second) fail("aggregate.budgets repeats a value");
  }
  if (c.fidelity_floors.empty()) {
    fail("aggregate.fidelity_floors must not be empty");
  }
  std::set<double> floors;
  for (double phi : c.fidelity_floors) {
    if (!(phi >= 0.0 && phi <= 1.0)) {
      fail("aggregate.fidelity_floors must lie in [0, 1]");
    }
    if (!floors.insert(phi).second) {
      fail("aggregate.fidelity_floors repeats a value");
    }
  }
  if (c.solver != "exact" && c.solver != "greedy" && c.solver != "both") {
    fail("aggregate.solver must be 'exact', 'greedy' or 'both'");
  }
  if (c.pool != "filtered" && c.pool != "unfiltered") {
    fail("aggregate.pool must be 'filtered' or 'unfiltered'");
  }
  if (c.variant != "both" && c.variant != c.pool) {
    fail("aggregate.pool '" + c.pool + "' is not trained by fffs.variant '" +
         c.variant + "'");
  }
  if (c.output_dir.empty()) fail("output_dir must not be empty");
}

ExperimentConfig LoadConfig(const std::filesystem::path& path) {
  std::string text;
  try {
    text = ReadFile(path);
  } catch (const IoError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    throw ConfigError("config: " + path.string() + " is not valid JSON");
  }
  return ConfigFromJson(j);
}

void SaveConfig(const ExperimentConfig& config,
                const std::filesystem::path& path) {
  WriteFileAtomic(path, ConfigToJson(config).dump(2) + "\n");
}

std::vector<std::string> ConfigKeys() {
  std::vector<std::string> keys;
  CollectKeys(ConfigToJson(ExperimentConfig{}), "", keys);
  return keys;
}

void SetConfigValue(json& root, const std::string& key,
                    const std::string& text) {
  const json defaults = ConfigToJson(ExperimentConfig{});
  const json::json_pointer pointer("/" + [&] {
    std::string p = key;
    std::replace(p.begin(), p.end(), '.', '/');
    return p;
  }());
  if (!defaults.contains(pointer)) {
    throw ConfigError("config: unknown key '" + key + "'");
  }
  const json& like = defaults.at(pointer);
  json value;
  if (like.is_array()) {
    value = json::array();
    // Element type follows the default list; string lists stay strings.
    json element_like = std::string();
    if (!like.empty()) element_like = like.front();
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
      if (item.empty()) continue;
      value.push_back(ParseScalar(key, item, element_like));
    }
  } else {
    value = ParseScalar(key, text, like);
  }
  root[pointer] = value;
}

void ApplySeedOverride(ExperimentConfig& config) {
  const char* text = std::getenv(kSeedEnvVar);
  if (text == nullptr || *text == '\0') return;
  unsigned long long seed;
  if (!ParseUnsigned(text, &seed)) {
    throw ConfigError(std::string(kSeedEnvVar) + " is not an unsigned integer");
  }
  config.seed = seed;
}

std::string RunStamp(const ExperimentConfig& config) {
  json j = ConfigToJson(config);
  // Only settings that shape the trained artifacts; aggregation settings may
  // be re-run inside the same directory.
  j.erase("output_dir");
  j.erase("aggregate");
  j.erase("timing");
  const std::string digest = HexDigest(Fnv1a64(j.dump()));
  return "run-" + std::to_string(config.seed) + "-" + digest.substr(0, 8);
}

}  // namespace aggrex
