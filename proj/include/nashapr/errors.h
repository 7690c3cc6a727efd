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

#ifndef NASHAPR_ERRORS_H_
#define NASHAPR_ERRORS_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace nashapr {

// Shapes of games, profiles or batches do not line up.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A generator spec is not valid for its game class.
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input data is malformed (non-finite payoffs, out-of-range entries).
class DataError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Bad configuration values (empty batch, empty split, bad hyperparameters).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An instance exceeds a hard size limit.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Non-finite values appeared during optimization.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An API was called out of order (stale cache, untrained model).
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A persisted file could not be decoded. offset() is the byte position at
// which decoding failed.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::uint64_t offset)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::uint64_t offset() const { return offset_; }

 private:
  std::uint64_t offset_;
};

}  // namespace nashapr

#endif  // NASHAPR_ERRORS_H_
