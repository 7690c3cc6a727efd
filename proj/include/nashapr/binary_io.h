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

// Little-endian byte encoding shared by the dataset and model file formats.

#ifndef NASHAPR_BINARY_IO_H_
#define NASHAPR_BINARY_IO_H_

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>
#include <vector>

#include "nashapr/errors.h"

namespace nashapr {

class ByteWriter {
 public:
  void Bytes(std::string_view s) { buffer_.append(s); }
  void U16(std::uint16_t v) { Unsigned(v, 2); }
  void U32(std::uint32_t v) { Unsigned(v, 4); }
  void U64(std::uint64_t v) { Unsigned(v, 8); }
  void F64(double v) { Unsigned(std::bit_cast<std::uint64_t>(v), 8); }
  // u32 byte length, then the bytes.
  void String(std::string_view s) {
    U32(static_cast<std::uint32_t>(s.size()));
    Bytes(s);
  }
  const std::string& data() const { return buffer_; }

 private:
  void Unsigned(std::uint64_t v, int width) {
    for (int k = 0; k < width; ++k) {
      buffer_.push_back(static_cast<char>((v >> (8 * k)) & 0xff));
    }
  }
  std::string buffer_;
};

// Every read checks the remaining length and throws FormatError carrying
// the offset of the failed read.
class ByteReader {
 public:
  explicit ByteReader(std::string_view data) : data_(data) {}

  std::string_view Bytes(std::size_t n) {
    Need(n);
    std::string_view out = data_.substr(pos_, n);
    pos_ += n;
    return out;
  }
  std::uint16_t U16() { return static_cast<std::uint16_t>(Unsigned(2)); }
  std::uint32_t U32() { return static_cast<std::uint32_t>(Unsigned(4)); }
  std::uint64_t U64() { return Unsigned(8); }
  double F64() { return std::bit_cast<double>(Unsigned(8)); }
  std::string String() {
    const std::uint32_t n = U32();
    return std::string(Bytes(n));
  }
  // Guards count-prefixed arrays against absurd lengths before allocating.
  void NeedItems(std::uint64_t count, std::size_t item_bytes) {
    if (item_bytes != 0 && count > remaining() / item_bytes) {
      throw FormatError("declared length exceeds file size", pos_);
    }
  }
  std::size_t offset() const { return pos_; }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  void Need(std::size_t n) const {
    if (n > remaining()) throw FormatError("unexpected end of data", pos_);
  }
  std::uint64_t Unsigned(int width) {
    Need(width);
    std::uint64_t v = 0;
    for (int k = 0; k < width; ++k) {
      v |= static_cast<std::uint64_t>(
               static_cast<unsigned char>(data_[pos_ + k]))
           << (8 * k);
    }
    pos_ += width;
    return v;
  }
  std::string_view data_;
  std::size_t pos_ = 0;
};

// Whole-file helpers; throw std::runtime_error on I/O failure.
std::string ReadFileBytes(const std::string& path);
void WriteFileBytes(const std::string& path, std::string_view bytes);

}  // namespace nashapr

#endif  // NASHAPR_BINARY_IO_H_
