//  Copyright 2026 The shh Authors
//
//  Licensed under the Apache License, Version 2.0 (the "License");
//  you may not use this file except in compliance with the License.
//  You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
//  Unless required by applicable law or agreed to in writing, software
//  distributed under the License is distributed on an "AS IS" BASIS,
//  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//  See the License for the specific language governing permissions and
//  limitations under the License.

// Versioned binary snapshots for sketch state.
//
// Layout: the four magic bytes "SHH1", one kind byte, then the sketch's
// fields. All integers are little-endian regardless of host order.

#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

#include "shh/core.hpp"

namespace shh::snapshot {

inline constexpr std::array<char, 4> kMagic = {'S', 'H', 'H', '1'};

enum class Kind : std::uint8_t {
  kMisraGries = 1,
  kCountMin = 2,
  kReservoir = 3,
};

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void header(Kind kind) {
    out_.write(kMagic.data(), kMagic.size());
    u8(static_cast<std::uint8_t>(kind));
  }

  void u8(std::uint8_t v) { out_.put(static_cast<char>(v)); }

  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.put(static_cast<char>((v >> (8 * i)) & 0xff));
  }

  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.put(static_cast<char>((v >> (8 * i)) & 0xff));
  }

  void bytes(const std::string& s) {
    u64(s.size());
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  void header(Kind expected) {
    std::array<char, 4> magic{};
    in_.read(magic.data(), magic.size());
    if (!in_ || magic != kMagic) throw Error(ErrorCode::kBadSnapshot, "missing SHH1 magic");
    if (u8() != static_cast<std::uint8_t>(expected)) {
      throw Error(ErrorCode::kBadSnapshot, "snapshot holds a different sketch kind");
    }
  }

  std::uint8_t u8() {
    int c = in_.get();
    if (c == std::char_traits<char>::eof()) throw Error(ErrorCode::kBadSnapshot, "truncated");
    return static_cast<std::uint8_t>(c);
  }

  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
    return v;
  }

  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
    return v;
  }

  std::string bytes() {
    std::uint64_t n = u64();
    if (n > (1ULL << 32)) throw Error(ErrorCode::kBadSnapshot, "implausible blob length");
    std::string s(n, '\0');
    in_.read(s.data(), static_cast<std::streamsize>(n));
    if (!in_) throw Error(ErrorCode::kBadSnapshot, "truncated");
    return s;
  }

 private:
  std::istream& in_;
};

// Element codecs used by templated sketches.

inline void write_value(Writer& w, Code c) { w.u32(c); }
inline void read_value(Reader& r, Code& c) { c = r.u32(); }

inline void write_value(Writer& w, std::uint64_t c) { w.u64(c); }
inline void read_value(Reader& r, std::uint64_t& c) { c = r.u64(); }

inline void write_value(Writer& w, const Item& item) {
  w.u32(static_cast<std::uint32_t>(item.size()));
  for (Code c : item.values) w.u32(c);
}

inline void read_value(Reader& r, Item& item) {
  std::uint32_t n = r.u32();
  item.values.resize(n);
  for (auto& c : item.values) c = r.u32();
}

}  // namespace shh::snapshot
