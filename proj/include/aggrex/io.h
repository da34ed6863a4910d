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

#ifndef AGGREX_IO_H_
#define AGGREX_IO_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace aggrex {

// Throws IoError when the file cannot be read.
std::string ReadFile(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it over `path`, so readers
// never observe a partial file. Creates missing parent directories.
void WriteFileAtomic(const std::filesystem::path& path,
                     std::string_view contents);

std::uint64_t Fnv1a64(std::string_view bytes);
// 16 lowercase hex digits.
std::string HexDigest(std::uint64_t value);

}  // namespace aggrex

#endif  // AGGREX_IO_H_
