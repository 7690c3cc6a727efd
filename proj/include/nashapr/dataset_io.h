// Copyright 2026 The NashApr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dataset files.
//
// Binary layout (little-endian):
//   "NFG1"  magic
//   u16     format version (1)
//   str     class name (u32 length + UTF-8)
//   u64     seed
//   u16     n, then n x u32 action counts
//   u32     class param count, then (str name, f64 value) pairs
//   u64     game count, then per game n * |A| f64 utilities (player-major,
//           joint actions row-major)
//   3 x     (u64 count + u64 indices) for train, validation, test

#ifndef NASHAPR_DATASET_IO_H_
#define NASHAPR_DATASET_IO_H_

#include <string>
#include <string_view>

#include "nashapr/generators.h"

namespace nashapr {

inline constexpr std::string_view kDatasetMagic = "NFG1";
inline constexpr std::uint16_t kDatasetVersion = 1;

std::string EncodeDataset(const Dataset& ds);
// Throws FormatError with the byte offset of the first bad field.
Dataset DecodeDataset(std::string_view bytes);

void SaveDataset(const Dataset& ds, const std::string& path);
Dataset LoadDataset(const std::string& path);

// Lossless JSON with the same fields, for inspection.
std::string DatasetToJson(const Dataset& ds);
Dataset DatasetFromJson(std::string_view json);

}  // namespace nashapr

#endif  // NASHAPR_DATASET_IO_H_
