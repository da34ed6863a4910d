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

#include "aggrex/data.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <utility>

#include "aggrex/error.h"
#include "aggrex/io.h"
#include "aggrex/rng.h"

namespace aggrex {
namespace {

constexpr std::string_view kLabelColumn = "label";

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    std::string_view field = line.substr(start, comma == std::string_view::npos
                                                    ? std::string_view::npos
                                                    : comma - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) {
      field.remove_prefix(1);
    }
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t')) {
      field.remove_suffix(1);
    }
    fields.push_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::string_view StripEol(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

bool ParseDouble(std::string_view text, double& out) {
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size() &&
         std::isfinite(out);
}

bool ParseInt(std::string_view text, int& out) {
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

RawTable ReadTable(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  RawTable table;
  std::string line;
  bool have_header = false;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    const std::string_view view = StripEol(line);
    if (!have_header) {
      if (view.empty()) continue;
      for (auto f : SplitFields(view)) table.header.emplace_back(f);
      have_header = true;
      continue;
    }
    ++row;
    if (view.empty()) continue;
    const auto fields = SplitFields(view);
    if (fields.size() != table.header.size()) {
      throw ParseError("expected " + std::to_string(table.header.size()) +
                           " fields, found " + std::to_string(fields.size()),
                       row);
    }
    std::vector<std::string> values;
    values.reserve(fields.size());
    for (auto f : fields) values.emplace_back(f);
    table.rows.push_back(std::move(values));
  }
  if (!have_header || table.rows.empty()) {
    throw ParseError("no data rows in " + path.string(), 0);
  }
  return table;
}

}  // namespace

FeatureSchema FeatureSchema::Make(std::size_t m_cont, std::size_t m_bin) {
  FeatureSchema schema;
  for (std::size_t i = 0; i < m_cont; ++i) {
    schema.names.push_back("c" + std::to_string(i));
    schema.kinds.push_back(FeatureKind::kContinuous);
  }
  for (std::size_t i = 0; i < m_bin; ++i) {
    schema.names.push_back("b" + std::to_string(i));
    schema.kinds.push_back(FeatureKind::kBinary);
  }
  return schema;
}

FeatureSchema FeatureSchema::FromKindString(const std::string& kinds) {
  FeatureSchema schema;
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    if (kinds[i] != 'c' && kinds[i] != 'b') {
      throw SchemaError("feature kind must be 'c' or 'b', got '" +
                        std::string(1, kinds[i]) + "'");
    }
    schema.names.push_back("f" + std::to_string(i));
    schema.kinds.push_back(kinds[i] == 'b' ? FeatureKind::kBinary
                                           : FeatureKind::kContinuous);
  }
  return schema;
}

std::vector<int> FeatureSchema::ContinuousFeatures() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    if (kinds[i] == FeatureKind::kContinuous)
      out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<int> FeatureSchema::BinaryFeatures() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    if (kinds[i] == FeatureKind::kBinary) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::string FeatureSchema::KindString() const {
  std::string out;
  for (auto k : kinds) out.push_back(k == FeatureKind::kBinary ? 'b' : 'c');
  return out;
}

void FeatureSchema::Validate() const {
  if (kinds.empty()) throw SchemaError("schema has no features");
  if (names.size() != kinds.size()) {
    throw SchemaError("schema has " + std::to_string(names.size()) +
                      " names but " + std::to_string(kinds.size()) + " kinds");
  }
  std::set<std::string> seen;
  for (const auto& name : names) {
    if (name == kLabelColumn) {
      throw SchemaError("feature may not be named 'label'");
    }
    if (!seen.insert(name).second) {
      throw SchemaError("duplicate feature name '" + name + "'");
    }
  }
}

Dataset::Dataset(FeatureSchema schema, Matrix x, std::vector<int> y,
                 std::optional<Scaler> scaler,
                 std::vector<std::string> warnings)
    : schema_(std::move(schema)),
      x_(std::move(x)),
      y_(std::move(y)),
      scaler_(std::move(scaler)),
      warnings_(std::move(warnings)) {
  schema_.Validate();
  if (x_.cols() != schema_.size()) {
    throw SchemaError("matrix has " + std::to_string(x_.cols()) +
                      " columns, schema has " + std::to_string(schema_.size()));
  }
  if (y_.size() != x_.rows()) {
    throw SchemaError("label count does not match row count");
  }
  for (std::size_t i = 0; i < x_.rows(); ++i) {
    if (y_[i] < 0) {
      throw SchemaError("row " + std::to_string(i + 1) +
                        ": labels must be nonnegative");
    }
    for (std::size_t j = 0; j < x_.cols(); ++j) {
      const double v = x_(i, j);
      if (!std::isfinite(v)) {
        throw SchemaError("row " + std::to_string(i + 1) +
                          ": non-finite value in column '" + schema_.names[j] +
                          "'");
      }
      if (schema_.IsBinary(j) && v != 0.0 && v != 1.0) {
        throw SchemaError("row " + std::to_string(i + 1) + ": binary column '" +
                          schema_.names[j] + "' holds " + FormatDouble(v));
      }
    }
  }
  if (scaler_ && (scaler_->shift.size() != schema_.size() ||
                  scaler_->scale.size() != schema_.size())) {
    throw SchemaError("scaler width does not match schema");
  }
}

std::vector<int> Dataset::LabelSet() const {
  std::vector<int> labels = y_;
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  return labels;
}

Dataset LoadDataset(const std::filesystem::path& path,
                    const FeatureSchema& schema) {
  schema.Validate();
  const RawTable table = ReadTable(path);
  if (table.header.size() != schema.size() + 1) {
    throw ParseError("header has " + std::to_string(table.header.size()) +
                         " columns; schema needs " +
                         std::to_string(schema.size()) + " features + label",
                     0);
  }
  std::unordered_map<std::string, std::size_t> column_of;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (!column_of.emplace(table.header[c], c).second) {
      throw ParseError("duplicate column '" + table.header[c] + "'", 0);
    }
  }
  const auto label_it = column_of.find(std::string(kLabelColumn));
  if (label_it == column_of.end()) {
    throw ParseError("missing 'label' column", 0);
  }
  std::vector<std::size_t> source(schema.size());
  for (std::size_t f = 0; f < schema.size(); ++f) {
    const auto it = column_of.find(schema.names[f]);
    if (it == column_of.end()) {
      throw ParseError("missing column '" + schema.names[f] + "'", 0);
    }
    source[f] = it->second;
  }

  const std::size_t n = table.rows.size();
  Matrix x(n, schema.size());
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& fields = table.rows[i];
    for (std::size_t f = 0; f < schema.size(); ++f) {
      const std::string& text = fields[source[f]];
      if (text.empty()) {
        throw ParseError("missing value in column '" + schema.names[f] + "'",
                         i + 1);
      }
      double v;
      if (!ParseDouble(text, v)) {
        throw ParseError(
            "bad number '" + text + "' in column '" + schema.names[f] + "'",
            i + 1);
      }
      if (schema.IsBinary(f) && v != 0.0 && v != 1.0) {
        throw SchemaError("row " + std::to_string(i + 1) + ": binary column '" +
                          schema.names[f] + "' holds " + text);
      }
      x(i, f) = v;
    }
    const std::string& label_text = fields[label_it->second];
    if (!ParseInt(label_text, y[i]) || y[i] < 0) {
      throw ParseError(
          "label must be a nonnegative integer, got '" + label_text + "'",
          i + 1);
    }
  }
  return Dataset(schema, std::move(x), std::move(y));
}

FeatureSchema InferSchema(const std::filesystem::path& path,
                          const std::vector<std::string>& binary_columns) {
  const RawTable table = ReadTable(path);
  FeatureSchema schema;
  bool has_label = false;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    const std::string& name = table.header[c];
    if (name == kLabelColumn) {
      has_label = true;
      continue;
    }
    bool binary;
    if (!binary_columns.empty()) {
      binary = std::find(binary_columns.begin(), binary_columns.end(), name) !=
               binary_columns.end();
    } else {
      binary = true;
      for (std::size_t r = 0; r < table.rows.size() && binary; ++r) {
        const std::string& text = table.rows[r][c];
        binary = text == "0" || text == "1";
      }
    }
    schema.names.push_back(name);
    schema.kinds.push_back(binary ? FeatureKind::kBinary
                                  : FeatureKind::kContinuous);
  }
  if (!has_label) throw ParseError("missing 'label' column", 0);
  for (const auto& name : binary_columns) {
    if (std::find(schema.names.begin(), schema.names.end(), name) ==
        schema.names.end()) {
      throw SchemaError("binary column '" + name + "' not in header");
    }
  }
  schema.Validate();
  return schema;
}

void WriteDataset(const Dataset& dataset, const std::filesystem::path& path) {
  std::ostringstream out;
  const auto& schema = dataset.schema();
  for (std::size_t f = 0; f < schema.size(); ++f) {
    out << schema.names[f] << ',';
  }
  out << kLabelColumn << '\n';
  for (std::size_t i = 0; i < dataset.rows(); ++i) {
    for (double v : dataset.Row(i)) out << FormatDouble(v) << ',';
    out << dataset.labels()[i] << '\n';
  }
  WriteFileAtomic(path, out.str());
}

Dataset Standardize(const Dataset& dataset) {
  const std::size_t n = dataset.rows();
  const std::size_t m = dataset.cols();
  if (n < 2) throw SchemaError("standardize needs at least 2 rows");
  Scaler scaler{std::vector<double>(m, 0.0), std::vector<double>(m, 1.0)};
  std::vector<std::string> warnings = dataset.warnings();
  Matrix x = dataset.x();
  for (std::size_t f = 0; f < m; ++f) {
    if (dataset.schema().IsBinary(f)) continue;
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += x(i, f);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = x(i, f) - mean;
      var += d * d;
    }
    var /= static_cast<double>(n);
    double scale = std::sqrt(var);
    if (!(scale > 0.0)) {
      scale = 1.0;
      warnings.push_back("column '" + dataset.schema().names[f] +
                         "' has zero variance; scale set to 1");
    }
    scaler.shift[f] = mean;
    scaler.scale[f] = scale;
    for (std::size_t i = 0; i < n; ++i) x(i, f) = (x(i, f) - mean) / scale;
  }
  if (dataset.scaler()) {
    // Compose with the existing map so InverseScale still reaches raw values.
    const Scaler& old = *dataset.scaler();
    for (std::size_t f = 0; f < m; ++f) {
      scaler.shift[f] = old.shift[f] + old.scale[f] * scaler.shift[f];
      scaler.scale[f] = old.scale[f] * scaler.scale[f];
    }
  }
  return Dataset(dataset.schema(), std::move(x), dataset.labels(),
                 std::move(scaler), std::move(warnings));
}

Dataset InverseScale(const Dataset& dataset) {
  if (!dataset.scaler()) return dataset;
  const Scaler& scaler = *dataset.scaler();
  Matrix x = dataset.x();
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t f = 0; f < x.cols(); ++f) {
      if (dataset.schema().IsBinary(f)) continue;
      x(i, f) = x(i, f) * scaler.scale[f] + scaler.shift[f];
    }
  }
  return Dataset(dataset.schema(), std::move(x), dataset.labels(), std::nullopt,
                 dataset.warnings());
}

int SynthLabel(const SynthSpec& spec, std::span<const double> row) {
  std::vector<int> relevant = spec.relevant;
  std::sort(relevant.begin(), relevant.end());
  const std::size_t m_cont = spec.m_cont;
  std::uint64_t cell = 0;
  for (std::size_t k = 0; k < relevant.size(); ++k) {
    const auto f = static_cast<std::size_t>(relevant[k]);
    const bool bit = f < m_cont ? row[f] > 0.0 : row[f] == 1.0;
    if (bit) cell |= std::uint64_t{1} << k;
  }
  return static_cast<int>(cell % static_cast<std::uint64_t>(spec.classes));
}

Dataset SynthMulticlass(const SynthSpec& spec) {
  const std::size_t m = spec.m_cont + spec.m_bin;
  if (spec.classes < 2) throw SchemaError("synth needs at least 2 classes");
  if (spec.relevant.empty()) {
    throw SchemaError("synth relevant feature set is empty");
  }
  if (spec.relevant.size() > 62) {
    throw SchemaError("synth supports at most 62 relevant features");
  }
  std::set<int> distinct;
  for (int f : spec.relevant) {
    if (f < 0 || static_cast<std::size_t>(f) >= m) {
      throw SchemaError("relevant feature " + std::to_string(f) +
                        " out of range [0, " + std::to_string(m) + ")");
    }
    if (!distinct.insert(f).second) {
      throw SchemaError("relevant feature " + std::to_string(f) + " repeated");
    }
  }
  if (spec.n == 0) throw SchemaError("synth needs n >= 1");

  Rng rng(spec.seed);
  Matrix x(spec.n, m);
  std::vector<int> y(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    for (std::size_t f = 0; f < spec.m_cont; ++f) x(i, f) = rng.Normal();
    for (std::size_t f = spec.m_cont; f < m; ++f) {
      x(i, f) = static_cast<double>(rng.Below(2));
    }
    y[i] = SynthLabel(spec, x.Row(i));
  }
  return Dataset(FeatureSchema::Make(spec.m_cont, spec.m_bin), std::move(x),
                 std::move(y));
}

std::string FormatDouble(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) return std::to_string(value);
  return std::string(buffer, ptr);
}

}  // namespace aggrex
