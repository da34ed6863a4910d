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

#ifndef AGGREX_DATA_H_
#define AGGREX_DATA_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aggrex/matrix.h"

namespace aggrex {

enum class FeatureKind { kContinuous, kBinary };

// Names and kinds of the m feature columns. Binary columns hold only 0 or 1.
struct FeatureSchema {
  std::vector<std::string> names;
  std::vector<FeatureKind> kinds;

  // Columns c0..c{m_cont-1} followed by b0..b{m_bin-1}.
  static FeatureSchema Make(std::size_t m_cont, std::size_t m_bin);
  // From a compact kind string such as "ccb" (c = continuous, b = binary).
  static FeatureSchema FromKindString(const std::string& kinds);

  std::size_t size() const { return kinds.size(); }
  bool IsBinary(std::size_t feature) const {
    return kinds[feature] == FeatureKind::kBinary;
  }
  std::vector<int> ContinuousFeatures() const;
  std::vector<int> BinaryFeatures() const;
  std::string KindString() const;

  // Throws SchemaError when names and kinds disagree in length, the schema is
  // empty, or names repeat.
  void Validate() const;

  friend bool operator==(const FeatureSchema&, const FeatureSchema&) = default;
};

// Per-feature affine map: standardized = (raw - shift) / scale. Binary
// features carry (0, 1).
struct Scaler {
  std::vector<double> shift;
  std::vector<double> scale;

  friend bool operator==(const Scaler&, const Scaler&) = default;
};

// Labelled tabular data. Immutable after construction.
class Dataset {
 public:
  // Validates shapes, binary values and label sign.
  Dataset(FeatureSchema schema, Matrix x, std::vector<int> y,
          std::optional<Scaler> scaler = std::nullopt,
          std::vector<std::string> warnings = {});

  std::size_t rows() const { return x_.rows(); }
  std::size_t cols() const { return x_.cols(); }
  const FeatureSchema& schema() const { return schema_; }
  const Matrix& x() const { return x_; }
  std::span<const double> Row(std::size_t i) const { return x_.Row(i); }
  const std::vector<int>& labels() const { return y_; }
  const std::optional<Scaler>& scaler() const { return scaler_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  // Sorted distinct labels.
  std::vector<int> LabelSet() const;

 private:
  FeatureSchema schema_;
  Matrix x_;
  std::vector<int> y_;
  std::optional<Scaler> scaler_;
  std::vector<std::string> warnings_;
};

// Reads a comma-separated file with a header row. Columns are matched to the
// schema by name; the label column is named "label". No imputation: an empty
// field is a parse error.
Dataset LoadDataset(const std::filesystem::path& path,
                    const FeatureSchema& schema);

// Builds a schema from a CSV header. Columns listed in `binary_columns` are
// binary; when it is empty, any column whose values are all 0 or 1 is binary.
FeatureSchema InferSchema(const std::filesystem::path& path,
                          const std::vector<std::string>& binary_columns = {});

// Writes the dataset in the format LoadDataset reads. Values use the shortest
// representation that parses back to the same double.
void WriteDataset(const Dataset& dataset, const std::filesystem::path& path);

// Zero mean, unit (population) standard deviation for continuous columns.
// A zero-variance column keeps scale 1 and adds a warning. Requires >= 2 rows.
Dataset Standardize(const Dataset& dataset);

// Undoes Standardize. Identity when the dataset has no scaler.
Dataset InverseScale(const Dataset& dataset);

struct SynthSpec {
  std::uint64_t seed = 1;
  std::size_t n = 500;
  std::size_t m_cont = 10;
  std::size_t m_bin = 10;
  int classes = 5;
  // 0-based feature indices the label depends on.
  std::vector<int> relevant = {10, 11, 12};
};

// The planted labelling rule. Each relevant feature contributes one bit
// (continuous: value > 0, binary: value == 1); the bits, in ascending feature
// order, form a cell index c and the label is c mod classes.
int SynthLabel(const SynthSpec& spec, std::span<const double> row);

// Continuous features ~ N(0, 1), binary ~ Bernoulli(1/2), labels from
// SynthLabel. Reproducible from spec.seed.
Dataset SynthMulticlass(const SynthSpec& spec);

// Shortest round-trip decimal form of a double.
std::string FormatDouble(double value);

}  // namespace aggrex

#endif  // AGGREX_DATA_H_
