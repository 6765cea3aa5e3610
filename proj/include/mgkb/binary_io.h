// Copyright 2026 The mgkb Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MGKB_BINARY_IO_H_
#define MGKB_BINARY_IO_H_

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

#include "mgkb/common.h"

namespace mgkb {

static_assert(std::endian::native == std::endian::little,
              "binary model files assume a little-endian host");

// Appends little-endian scalars to a byte string.
class BinaryWriter {
 public:
  void Bytes(std::string_view bytes) { out_.append(bytes); }
  void U32(std::uint32_t v) { Raw(&v, sizeof(v)); }
  void U64(std::uint64_t v) { Raw(&v, sizeof(v)); }
  void F32(float v) { Raw(&v, sizeof(v)); }
  void String(std::string_view s) {
    U32(static_cast<std::uint32_t>(s.size()));
    Bytes(s);
  }
  std::string &data() { return out_; }

 private:
  void Raw(const void *p, std::size_t n) {
    out_.append(static_cast<const char *>(p), n);
  }
  std::string out_;
};

class BinaryReader {
 public:
  explicit BinaryReader(std::string_view bytes) : in_(bytes) {}

  std::string_view Bytes(std::size_t n) {
    if (pos_ + n > in_.size()) throw Error("truncated binary file");
    std::string_view s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::uint32_t U32() { return Scalar<std::uint32_t>(); }
  std::uint64_t U64() { return Scalar<std::uint64_t>(); }
  float F32() { return Scalar<float>(); }
  std::string String() { return std::string(Bytes(U32())); }
  bool AtEnd() const { return pos_ == in_.size(); }

 private:
  template <typename T>
  T Scalar() {
    T v;
    std::memcpy(&v, Bytes(sizeof(T)).data(), sizeof(T));
    return v;
  }
  std::string_view in_;
  std::size_t pos_ = 0;
};

}  // namespace mgkb

#endif  // MGKB_BINARY_IO_H_
