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

// Binary model files: little-endian, magic "NEA1", u16 version, the
// architecture descriptor, every tensor as f64 and optionally the Adam state
// so training can be resumed.
//
//   arch:    u16 players, u32 per-player action counts, u32 hidden layer
//            count, u32 widths, f64 epsilon, momentum, clip lower, clip upper
//   tensors: Weights::Tensors() order, then each hidden layer's running mean
//            and running variance
//   adam:    u8 flag; if 1: u64 step, f64 beta1, beta2, epsilon, learning
//            rate, then first and second moments in tensor order

#ifndef NASHAPR_MODEL_IO_H_
#define NASHAPR_MODEL_IO_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "nashapr/approximator.h"

namespace nashapr {

inline constexpr std::string_view kModelMagic = "NEA1";
inline constexpr std::uint16_t kModelVersion = 1;

struct ModelFile {
  ApproximatorArch arch;
  ApproximatorParams params;
  std::optional<AdamState> adam;
};

std::string EncodeModel(const ApproximatorArch& arch,
                        const ApproximatorParams& params,
                        const AdamState* adam = nullptr);
// Throws FormatError on any malformed input.
ModelFile DecodeModel(std::string_view bytes);
// As above, and also rejects a file whose architecture differs from
// `expected`.
ModelFile DecodeModel(std::string_view bytes, const ApproximatorArch& expected);

void SaveModel(const std::string& path, const ApproximatorArch& arch,
               const ApproximatorParams& params,
               const AdamState* adam = nullptr);
ModelFile LoadModel(const std::string& path);
ModelFile LoadModel(const std::string& path, const ApproximatorArch& expected);

}  // namespace nashapr

#endif  // NASHAPR_MODEL_IO_H_
