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
#include <unordered_map>
#include <utility>
#include <vector>

#include "shh/core.hpp"
#include "shh/sketches/snapshot.hpp"

namespace shh {

/// Misra-Gries frequent-items summary with at most `counter_budget` counters.
///
/// For every key x after m updates:
///   true_count(x) - m / counter_budget <= estimate(x) <= true_count(x).
template <typename Key = Code>
class MisraGries {
 public:
  explicit MisraGries(std::size_t counter_budget) : budget_(counter_budget) {
    if (budget_ == 0) throw Error(ErrorCode::kInvalidArgument, "Misra-Gries budget must be >= 1");
    counters_.reserve(budget_ + 1);
  }

  void update(const Key& x) {
    ++processed_;
    if (auto it = counters_.find(x); it != counters_.end()) {
      ++it->second;
      return;
    }
    if (counters_.size() < budget_) {
      counters_.emplace(x, 1);
      return;
    }
    // Full and x untracked: decrement everything, x's own unit included.
    for (auto it = counters_.begin(); it != counters_.end();) {
      if (--it->second == 0) {
        it = counters_.erase(it);
      } else {
        ++it;
      }
    }
  }

  Count estimate(const Key& x) const {
    auto it = counters_.find(x);
    return it == counters_.end() ? 0 : it->second;
  }

  std::size_t budget() const noexcept { return budget_; }
  Count processed() const noexcept { return processed_; }
  std::size_t size() const noexcept { return counters_.size(); }
  const std::unordered_map<Key, Count>& counters() const noexcept { return counters_; }

  /// Tracked (key, estimate) pairs in ascending key order.
  std::vector<std::pair<Key, Count>> entries() const {
    std::vector<std::pair<Key, Count>> out(counters_.begin(), counters_.end());
    std::sort(out.begin(), out.end());
    return out;
  }

  void save(std::ostream& out) const {
    snapshot::Writer w(out);
    w.header(snapshot::Kind::kMisraGries);
    w.u64(budget_);
    w.u64(processed_);
    auto sorted = entries();
    w.u64(sorted.size());
    for (const auto& [k, c] : sorted) {
      snapshot::write_value(w, k);
      w.u64(c);
    }
  }

  static MisraGries load(std::istream& in) {
    snapshot::Reader r(in);
    r.header(snapshot::Kind::kMisraGries);
    MisraGries mg(r.u64());
    mg.processed_ = r.u64();
    std::uint64_t n = r.u64();
    if (n > mg.budget_) throw Error(ErrorCode::kBadSnapshot, "more counters than budget");
    for (std::uint64_t i = 0; i < n; ++i) {
      Key k{};
      snapshot::read_value(r, k);
      Count c = r.u64();
      if (c == 0) throw Error(ErrorCode::kBadSnapshot, "zero counter");
      mg.counters_.emplace(k, c);
    }
    return mg;
  }

  friend bool operator==(const MisraGries& a, const MisraGries& b) {
    return a.budget_ == b.budget_ && a.processed_ == b.processed_ && a.counters_ == b.counters_;
  }

 private:
  std::size_t budget_;
  Count processed_ = 0;
  std::unordered_map<Key, Count> counters_;
};

}  // namespace shh
