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

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "shh/core.hpp"
#include "shh/sketches/snapshot.hpp"

namespace shh {

inline constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Count-Min sketch over 64-bit keys: `depth` rows of `width` counters, one
/// independently seeded hash per row. Point queries never underestimate.
class CountMin {
 public:
  static constexpr std::size_t kDefaultDepth = 4;

  CountMin(std::size_t width, std::size_t depth, std::uint64_t seed)
      : width_(width), depth_(depth), table_(width * depth, 0) {
    if (width_ == 0 || depth_ == 0) {
      throw Error(ErrorCode::kBudgetTooSmall, "Count-Min width and depth must be >= 1");
    }
    row_seeds_.reserve(depth_);
    std::uint64_t s = seed;
    for (std::size_t r = 0; r < depth_; ++r) {
      s = splitmix64(s);
      row_seeds_.push_back(s);
    }
  }

  /// Sketch that fits `cells` counters: width = cells / depth.
  static CountMin from_budget(std::size_t cells, std::uint64_t seed,
                              std::size_t depth = kDefaultDepth) {
    if (depth == 0 || cells / depth == 0) {
      throw Error(ErrorCode::kBudgetTooSmall,
                  "budget of " + std::to_string(cells) + " cells leaves Count-Min width < 1");
    }
    return CountMin(cells / depth, depth, seed);
  }

  void update(std::uint64_t x, Count c = 1) {
    processed_ += c;
    for (std::size_t r = 0; r < depth_; ++r) table_[r * width_ + bucket(r, x)] += c;
  }

  Count point_query(std::uint64_t x) const {
    Count best = std::numeric_limits<Count>::max();
    for (std::size_t r = 0; r < depth_; ++r) {
      best = std::min(best, table_[r * width_ + bucket(r, x)]);
    }
    return best;
  }

  std::size_t bucket(std::size_t row, std::uint64_t x) const {
    return static_cast<std::size_t>(splitmix64(x ^ row_seeds_[row]) % width_);
  }

  std::size_t width() const noexcept { return width_; }
  std::size_t depth() const noexcept { return depth_; }
  std::size_t cells() const noexcept { return table_.size(); }
  Count processed() const noexcept { return processed_; }

  void save(std::ostream& out) const {
    snapshot::Writer w(out);
    w.header(snapshot::Kind::kCountMin);
    w.u64(width_);
    w.u64(depth_);
    w.u64(processed_);
    for (std::uint64_t s : row_seeds_) w.u64(s);
    for (Count c : table_) w.u64(c);
  }

  static CountMin load(std::istream& in) {
    snapshot::Reader r(in);
    r.header(snapshot::Kind::kCountMin);
    std::uint64_t width = r.u64();
    std::uint64_t depth = r.u64();
    if (width == 0 || depth == 0 || width > (1ULL << 32) / depth) {
      throw Error(ErrorCode::kBadSnapshot, "bad Count-Min geometry");
    }
    CountMin cm(width, depth, 0);
    cm.processed_ = r.u64();
    for (auto& s : cm.row_seeds_) s = r.u64();
    for (auto& c : cm.table_) c = r.u64();
    return cm;
  }

  friend bool operator==(const CountMin&, const CountMin&) = default;

 private:
  std::size_t width_;
  std::size_t depth_;
  Count processed_ = 0;
  std::vector<std::uint64_t> row_seeds_;
  std::vector<Count> table_;
};

}  // namespace shh
