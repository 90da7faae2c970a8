/*
 * Copyright 2026 The vidagg Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef VIDAGG_SRC_BINARY_IO_H_
#define VIDAGG_SRC_BINARY_IO_H_

// Little-endian byte cursor helpers shared by the .vemb and VWTS codecs.

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vidagg/error.h"

namespace vidagg::internal {

std::vector<uint8_t> ReadFileBytes(const std::filesystem::path& path);
void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const uint8_t> bytes);

class ByteWriter {
 public:
  void Bytes(std::string_view s) { buf_.insert(buf_.end(), s.begin(), s.end()); }
  void U8(uint8_t v) { buf_.push_back(v); }
  void U16(uint16_t v) { Uint(v, 2); }
  void U32(uint32_t v) { Uint(v, 4); }
  void U64(uint64_t v) { Uint(v, 8); }
  void F32(float v) { U32(std::bit_cast<uint32_t>(v)); }

  std::vector<uint8_t>& buffer() { return buf_; }

 private:
  void Uint(uint64_t v, int width) {
    for (int i = 0; i < width; ++i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }

  std::vector<uint8_t> buf_;
};

// Every read checks the remaining length first; running past the end throws
// `truncated_code` so callers never index outside the buffer.
class ByteReader {
 public:
  ByteReader(std::span<const uint8_t> bytes, ErrorCode truncated_code)
      : bytes_(bytes), truncated_code_(truncated_code) {}

  size_t remaining() const { return bytes_.size() - pos_; }
  size_t position() const { return pos_; }

  void Require(uint64_t n) const {
    if (n > remaining()) {
      throw Error(truncated_code_, "file truncated at byte " + std::to_string(pos_));
    }
  }

  std::string Bytes(size_t n) {
    Require(n);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  uint8_t U8() { return static_cast<uint8_t>(Uint(1)); }
  uint16_t U16() { return static_cast<uint16_t>(Uint(2)); }
  uint32_t U32() { return static_cast<uint32_t>(Uint(4)); }
  uint64_t U64() { return Uint(8); }
  float F32() { return std::bit_cast<float>(U32()); }

 private:
  uint64_t Uint(int width) {
    Require(static_cast<uint64_t>(width));
    uint64_t v = 0;
    for (int i = 0; i < width; ++i) v |= static_cast<uint64_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += static_cast<size_t>(width);
    return v;
  }

  std::span<const uint8_t> bytes_;
  size_t pos_ = 0;
  ErrorCode truncated_code_;
};

}  // namespace vidagg::internal

#endif  // VIDAGG_SRC_BINARY_IO_H_
