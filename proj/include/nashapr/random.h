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

// Counter-based seeded random streams.
//
// Stream(seed, index) depends only on its two arguments, so game i of a
// dataset can be generated without touching games 0..i-1. Distributions are
// implemented here rather than taken from <random>, whose distribution
// algorithms differ between standard libraries; only std::mt19937_64, whose
// output sequence is fixed by the standard, is used underneath.

#ifndef NASHAPR_RANDOM_H_
#define NASHAPR_RANDOM_H_

#include <cstdint>
#include <random>
#include <vector>

namespace nashapr {

std::uint64_t SplitMix64(std::uint64_t x);

// Mixes (seed, index) into a single 64-bit stream key.
std::uint64_t StreamKey(std::uint64_t seed, std::uint64_t index);

class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t index)
      : engine_(StreamKey(seed, index)) {}

  std::uint64_t NextU64() { return engine_(); }
  // Uniform in [0, 1) with 53 random bits.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Uniform integer in [lo, hi], inclusive.
  std::int64_t UniformInt(std::int64_t lo, std::int64_t hi);
  // Standard exponential.
  double Exponential();
  // Fisher-Yates permutation of 0..n-1.
  std::vector<std::size_t> Permutation(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace nashapr

#endif  // NASHAPR_RANDOM_H_
