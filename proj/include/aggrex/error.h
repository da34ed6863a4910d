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

#ifndef AGGREX_ERROR_H_
#define AGGREX_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace aggrex {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. `row` is the 1-based data row (0 when not tied to a
// row, e.g. a bad header).
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t row)
      : Error(row == 0 ? message
                       : "row " + std::to_string(row) + ": " + message),
        row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

// A value violates the feature schema (e.g. a binary column holding 2).
class SchemaError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace aggrex

#endif  // AGGREX_ERROR_H_
