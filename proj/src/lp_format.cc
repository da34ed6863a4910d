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

#include "aggrex/lp_format.h"

#include <cctype>
#include <charconv>
#include <sstream>

#include "aggrex/data.h"
#include "aggrex/error.h"
#include "aggrex/io.h"

namespace aggrex {
namespace {

constexpr int kTermsPerLine = 16;

std::string FormatTerm(const std::string& name, double coef, bool first) {
  std::string out;
  if (coef < 0) {
    out = first ? "- " : " - ";
    coef = -coef;
  } else if (!first) {
    out = " + ";
  }
  if (coef != 1.0) out += FormatDouble(coef) + " ";
  return out + name;
}

std::string FormatExpression(const IpModel& model,
                             const std::vector<IpTerm>& terms) {
  std::string out;
  for (std::size_t t = 0; t < terms.size(); ++t) {
    if (t > 0 && t % kTermsPerLine == 0) out += "\n   ";
    out +=
        FormatTerm(model.variables[terms[t].var].Name(), terms[t].coef, t == 0);
  }
  return out;
}

bool IsSense(const std::string& token) {
  return token == "<=" || token == ">=" || token == "=" || token == "<" ||
         token == ">" || token == "=<" || token == "=>";
}

std::string NormalizeSense(const std::string& token) {
  if (token == "<" || token == "=<") return "<=";
  if (token == ">" || token == "=>") return ">=";
  return token;
}

bool ParseNumber(const std::string& token, double* value) {
  const char* begin = token.data();
  const char* end = begin + token.size();
  if (begin != end && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, *value);
  return ec == std::errc() && ptr == end;
}

std::string Lower(std::string s) {
  for (char& ch : s) ch = static_cast<char>(std::tolower(ch));
  return s;
}

// Splits "a:" / "+"/"-" / "<=" tokens apart even when written without spaces.
std::vector<std::string> Tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(current);
    current.clear();
  };
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char ch = line[k];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      flush();
    } else if (ch == ':') {
      current += ch;
      flush();
    } else if (ch == '<' || ch == '>' || ch == '=') {
      flush();
      std::string op(1, ch);
      if (k + 1 < line.size() &&
          (line[k + 1] == '=' || line[k + 1] == '<' || line[k + 1] == '>')) {
        op += line[++k];
      }
      tokens.push_back(op);
    } else if ((ch == '+' || ch == '-') &&
               (current.empty() ||
                (current.back() != 'e' && current.back() != 'E'))) {
      flush();
      tokens.push_back(std::string(1, ch));
    } else {
      current += ch;
    }
  }
  flush();
  return tokens;
}

// Parses "[name:] expr [sense rhs]" from a token stream.
struct ParsedRow {
  std::string name;
  std::vector<LpTerm> terms;
  std::string sense;
  double rhs = 0.0;
};

ParsedRow ParseRowTokens(const std::vector<std::string>& tokens, int line) {
  ParsedRow row;
  std::size_t k = 0;
  if (!tokens.empty() && tokens[0].size() > 1 && tokens[0].back() == ':') {
    row.name = tokens[0].substr(0, tokens[0].size() - 1);
    k = 1;
  }
  double sign = 1.0;
  double coef = 1.0;
  bool have_coef = false;
  for (; k < tokens.size(); ++k) {
    const std::string& tok = tokens[k];
    if (IsSense(tok)) {
      row.sense = NormalizeSense(tok);
      if (k + 1 >= tokens.size())
        throw ParseError("missing right-hand side", line);
      double rhs_sign = 1.0;
      std::size_t r = k + 1;
      if (tokens[r] == "-" || tokens[r] == "+") {
        rhs_sign = tokens[r] == "-" ? -1.0 : 1.0;
        ++r;
      }
      if (r + 1 != tokens.size() || !ParseNumber(tokens[r], &row.rhs)) {
        throw ParseError("bad right-hand side", line);
      }
      row.rhs *= rhs_sign;
      return row;
    }
    if (tok == "+" || tok == "-") {
      sign = tok == "-" ? -sign : sign;
      continue;
    }
    double number;
    if (ParseNumber(tok, &number)) {
      coef *= number;
      have_coef = true;
      continue;
    }
    row.terms.push_back({tok, sign * coef});
    sign = 1.0;
    coef = 1.0;
    have_coef = false;
  }
  if (have_coef) throw ParseError("dangling coefficient", line);
  return row;
}

}  // namespace

std::string WriteLp(const IpModel& model) {
  std::ostringstream out;
  out << "\\ aggrex coverage model\n";
  out << "\\ candidates " << model.candidates << " points " << model.points
      << " budget " << model.budget << " fidelity_floor "
      << FormatDouble(model.fidelity_floor) << "\n";
  out << "\\ radius rows presolved: z_i_j exists only where point j lies in "
         "the ball of candidate i\n";
  for (std::size_t i = 0; i < model.candidates; ++i) {
    std::string fixed;
    for (std::size_t j = 0; j < model.points; ++j) {
      if (model.ZVar(i, j) < 0) fixed += " " + std::to_string(j);
    }
    if (!fixed.empty()) {
      out << "\\ fixed z_" << i << "_j = 0 for j in" << fixed << "\n";
    }
  }
  out << "Maximize\n obj: ";
  std::vector<IpTerm> objective;
  for (int v : model.objective) objective.push_back({v, 1.0});
  out << FormatExpression(model, objective) << "\n";
  out << "Subject To\n";
  for (const IpRow& row : model.rows) {
    out << " " << row.name << ": " << FormatExpression(model, row.terms)
        << (row.sense == RowSense::kLessEqual ? " <= " : " >= ")
        << FormatDouble(row.rhs) << "\n";
  }
  out << "Binary\n";
  for (const IpVariable& v : model.variables) out << " " << v.Name() << "\n";
  out << "End\n";
  return out.str();
}

void ExportLp(const IpModel& model, const std::filesystem::path& path) {
  WriteFileAtomic(path, WriteLp(model));
}

const LpRow* LpModel::FindRow(const std::string& name) const {
  for (const LpRow& row : rows) {
    if (row.name == name) return &row;
  }
  return nullptr;
}

LpModel ParseLp(const std::string& text) {
  enum class Section {
    kNone,
    kObjective,
    kConstraints,
    kBounds,
    kBinary,
    kGeneral,
    kEnd
  };
  LpModel model;
  Section section = Section::kNone;
  std::vector<std::string> pending;
  int pending_line = 0;

  auto finish_row = [&] {
    if (pending.empty()) return;
    ParsedRow parsed = ParseRowTokens(pending, pending_line);
    if (section == Section::kObjective) {
      if (!parsed.sense.empty()) {
        throw ParseError("objective has a sense", pending_line);
      }
      model.objective = parsed.terms;
    } else {
      if (parsed.sense.empty()) {
        throw ParseError("constraint without a sense", pending_line);
      }
      model.rows.push_back(
          {parsed.name, parsed.terms, parsed.sense, parsed.rhs});
    }
    for (const LpTerm& t : parsed.terms) model.variables.insert(t.var);
    pending.clear();
  };

  std::istringstream in(text);
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto comment = line.find('\\');
    if (comment != std::string::npos) line.erase(comment);
    std::vector<std::string> tokens = Tokenize(line);
    if (tokens.empty()) continue;

    const std::string head = Lower(tokens[0]);
    Section next = section;
    bool keyword = tokens.size() <= 2;
    if (head == "maximize" || head == "maximum" || head == "max") {
      next = Section::kObjective;
      model.maximize = true;
    } else if (head == "minimize" || head == "minimum" || head == "min") {
      next = Section::kObjective;
      model.maximize = false;
    } else if (head == "subject" || head == "st" || head == "s.t.") {
      next = Section::kConstraints;
    } else if (head == "bounds") {
      next = Section::kBounds;
    } else if (head == "binary" || head == "binaries" || head == "bin") {
      next = Section::kBinary;
    } else if (head == "general" || head == "generals" || head == "gen") {
      next = Section::kGeneral;
    } else if (head == "end") {
      next = Section::kEnd;
    } else {
      keyword = false;
    }
    if (keyword) {
      finish_row();
      section = next;
      continue;
    }

    switch (section) {
      case Section::kObjective:
        if (pending.empty()) pending_line = line_number;
        pending.insert(pending.end(), tokens.begin(), tokens.end());
        break;
      case Section::kConstraints: {
        // A new named row starts whenever a "name:" token opens the line.
        if (tokens[0].size() > 1 && tokens[0].back() == ':') finish_row();
        if (pending.empty()) pending_line = line_number;
        pending.insert(pending.end(), tokens.begin(), tokens.end());
        break;
      }
      case Section::kBinary:
      case Section::kGeneral:
        for (const std::string& t : tokens) {
          model.binaries.insert(t);
          model.variables.insert(t);
        }
        break;
      case Section::kBounds:
        break;
      case Section::kNone:
        throw ParseError("content before the objective section", line_number);
      case Section::kEnd:
        throw ParseError("content after End", line_number);
    }
  }
  finish_row();
  if (section != Section::kEnd) throw ParseError("missing End", line_number);
  return model;
}

}  // namespace aggrex
