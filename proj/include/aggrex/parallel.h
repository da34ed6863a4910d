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

#ifndef AGGREX_PARALLEL_H_
#define AGGREX_PARALLEL_H_

namespace aggrex {

// Selects between the OpenMP kernel and its serial reference. Both produce
// bit-identical results; the serial path exists for testing and benchmarking.
enum class ExecPolicy { kSerial, kParallel };

}  // namespace aggrex

#endif  // AGGREX_PARALLEL_H_
