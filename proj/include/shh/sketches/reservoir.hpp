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
#include <random>
#include <sstream>
#include <vector>

#include "shh/core.hpp"
#include "shh/sketches/snapshot.hpp"

namespace shh {

/// Uniform sample without replacement of fixed capacity (Algorithm R).
template <typename T>
class Reservoir {
 public:
  Reservoir(std::size_t capacity, std::uint64_t seed)
      : capacity_(capacity), seed_(seed), rng_(seed) {
    samples_.reserve(std::min<std::size_t>(capacity_, std::size_t{1} << 20));
  }

  void update(const T& item) {
    ++seen_;
    if (samples_.size() < capacity_) {
      samples_.push_back(item);
      return;
    }
    if (capacity_ == 0) return;
    std::uniform_int_distribution<std::uint64_t> slot(0, seen_ - 1);
    std::uint64_t j = slot(rng_);
    if (j < capacity_) samples_[j] = item;
  }

  std::size_t capacity() const noexcept { return capacity_; }
  std::uint64_t seed() const noexcept { return seed_; }
  Count seen() const noexcept { return seen_; }
  const std::vector<T>& samples() const noexcept { return samples_; }
  std::vector<T> release() && { return std::move(samples_); }

  void save(std::ostream& out) const {
    snapshot::Writer w(out);
    w.header(snapshot::Kind::kReservoir);
    w.u64(capacity_);
    w.u64(seed_);
    w.u64(seen_);
    std::ostringstream rng_state;
    rng_state << rng_;
    w.bytes(rng_state.str());
    w.u64(samples_.size());
    for (const T& s : samples_) snapshot::write_value(w, s);
  }

  static Reservoir load(std::istream& in) {
    snapshot::Reader r(in);
    r.header(snapshot::Kind::kReservoir);
    std::uint64_t capacity = r.u64();
    std::uint64_t seed = r.u64();
    if (capacity > (1ULL << 32)) throw Error(ErrorCode::kBadSnapshot, "implausible capacity");
    Reservoir res(capacity, seed);
    res.seen_ = r.u64();
    std::istringstream rng_state(r.bytes());
    rng_state >> res.rng_;
    if (!rng_state) throw Error(ErrorCode::kBadSnapshot, "bad RNG state");
    std::uint64_t n = r.u64();
    if (n > capacity || n > res.seen_) throw Error(ErrorCode::kBadSnapshot, "sample count");
    res.samples_.resize(n);
    for (auto& s : res.samples_) snapshot::read_value(r, s);
    return res;
  }

  friend bool operator==(const Reservoir& a, const Reservoir& b) {
    return a.capacity_ == b.capacity_ && a.seed_ == b.seed_ && a.seen_ == b.seen_ &&
           a.rng_ == b.rng_ && a.samples_ == b.samples_;
  }

 private:
  std::size_t capacity_;
  std::uint64_t seed_;
  Count seen_ = 0;
  std::mt19937_64 rng_;
  std::vector<T> samples_;
};

}  // namespace shh
