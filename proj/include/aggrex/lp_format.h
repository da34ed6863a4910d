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

#ifndef AGGREX_LP_FORMAT_H_
#define AGGREX_LP_FORMAT_H_

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "aggrex/aggregate.h"

namespace aggrex {

// CPLEX LP text for the coverage program. Rows keep their model names
// (link_i_j, cover_i_j, any_j, fid_i, budget); every variable is binary.
// Pairs outside a candidate's radius are listed in comments since their
// z variables are fixed at zero and omitted.
std::string WriteLp(const IpModel& model);
void ExportLp(const IpModel& model, const std::filesystem::path& path);

struct LpTerm {
  std::string var;
  double coef;
};

struct LpRow {
  std::string name;
  std::vector<LpTerm> terms;
  std::string sense;  // "<=", ">=" or "="
  double rhs = 0.0;
};

struct LpModel {
  bool maximize = true;
  std::vector<LpTerm> objective;
  std::vector<LpRow> rows;
  std::set<std::string> binaries;
  // Every variable named anywhere in the file.
  std::set<std::string> variables;

  const LpRow* FindRow(const std::string& name) const;
};

// Reads the subset of the LP format that WriteLp emits. Throws ParseError.
LpModel ParseLp(const std::string& text);

}  // namespace aggrex

#endif  // AGGREX_LP_FORMAT_H_
