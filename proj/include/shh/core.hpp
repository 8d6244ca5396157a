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
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shh/error.hpp"

namespace shh {

/// Dictionary-encoded categorical value.
using Code = std::uint32_t;
using Count = std::uint64_t;

/// One stream record: a fixed-length vector of value codes.
struct Item {
  std::vector<Code> values;

  Item() = default;
  explicit Item(std::vector<Code> v) : values(std::move(v)) {}
  Item(std::initializer_list<Code> v) : values(v) {}

  std::size_t size() const noexcept { return values.size(); }
  Code operator[](std::size_t i) const { return values[i]; }

  friend auto operator<=>(const Item&, const Item&) = default;
};

/// Ordered set of k distinct coordinate indices, all below d.
class Subcube {
 public:
  Subcube() = default;

  static Subcube make(std::span<const std::size_t> indices, std::size_t d) {
    if (indices.empty()) throw Error(ErrorCode::kEmpty, "subcube has no coordinates");
    std::vector<std::size_t> coords(indices.begin(), indices.end());
    for (std::size_t c : coords) {
      if (c >= d) {
        throw Error(ErrorCode::kIndexOutOfRange,
                    "coordinate " + std::to_string(c) + " not below d=" + std::to_string(d));
      }
    }
    std::vector<std::size_t> sorted = coords;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw Error(ErrorCode::kDuplicateIndex, "coordinate repeated in subcube");
    }
    return Subcube(std::move(coords));
  }

  std::span<const std::size_t> coords() const noexcept { return coords_; }
  std::size_t size() const noexcept { return coords_.size(); }
  std::size_t operator[](std::size_t j) const { return coords_[j]; }
  std::size_t max_coord() const { return *std::max_element(coords_.begin(), coords_.end()); }

  /// "1,2,3" style rendering with 1-based indices (the CLI convention).
  std::string to_string_1based() const {
    std::string out;
    for (std::size_t j = 0; j < coords_.size(); ++j) {
      if (j) out += ',';
      out += std::to_string(coords_[j] + 1);
    }
    return out;
  }

  friend auto operator<=>(const Subcube&, const Subcube&) = default;

 private:
  explicit Subcube(std::vector<std::size_t> coords) : coords_(std::move(coords)) {}
  std::vector<std::size_t> coords_;
};

inline Subcube make_subcube(std::initializer_list<std::size_t> indices, std::size_t d) {
  return Subcube::make(std::span<const std::size_t>(indices.begin(), indices.size()), d);
}

inline Subcube make_subcube(const std::vector<std::size_t>& indices, std::size_t d) {
  return Subcube::make(indices, d);
}

/// Joint value of an item restricted to a subcube, aligned with its coords.
struct JointValue {
  std::vector<Code> values;

  JointValue() = default;
  explicit JointValue(std::vector<Code> v) : values(std::move(v)) {}
  JointValue(std::initializer_list<Code> v) : values(v) {}

  std::size_t size() const noexcept { return values.size(); }
  Code operator[](std::size_t i) const { return values[i]; }

  friend auto operator<=>(const JointValue&, const JointValue&) = default;
};

struct JointValueHash {
  std::size_t operator()(const JointValue& v) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (Code c : v.values) {
      h ^= c;
      h *= 0x100000001b3ULL;
      h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
  }
};

inline JointValue project(const Item& item, const Subcube& t) {
  JointValue out;
  out.values.reserve(t.size());
  for (std::size_t c : t.coords()) {
    if (c >= item.size()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "item of length " + std::to_string(item.size()) + " has no coordinate " +
                      std::to_string(c));
    }
    out.values.push_back(item.values[c]);
  }
  return out;
}

enum class Verdict { kNo, kYes };

inline const char* to_string(Verdict v) { return v == Verdict::kYes ? "YES" : "NO"; }

/// Thresholds shared by every algorithm.
///
/// gamma is the heavy-hitter ratio; lambda is always gamma / 2; gamma_star is
/// the decision threshold the query procedures compare against (defaults to
/// lambda). alpha_budget is the model-error bound the model-based algorithms
/// rely on (at most gamma / 10).
class HHParams {
 public:
  explicit HHParams(double gamma) : HHParams(gamma, gamma / 2.0) {}

  HHParams(double gamma, double gamma_star, std::optional<double> alpha_budget = std::nullopt)
      : gamma_(gamma), gamma_star_(gamma_star), alpha_budget_(alpha_budget.value_or(gamma / 10.0)) {
    check_gamma();
    if (!(gamma_star_ > gamma_ / 4.0 && gamma_star_ <= gamma_)) {
      throw Error(ErrorCode::kInvalidParams, "gamma_star must lie in (gamma/4, gamma]");
    }
    if (!(alpha_budget_ >= 0.0 && alpha_budget_ <= gamma_ / 10.0)) {
      throw Error(ErrorCode::kInvalidParams, "alpha_budget must lie in [0, gamma/10]");
    }
  }

  /// Relaxed constructor for threshold sweeps: any positive gamma_star.
  static HHParams for_sweep(double gamma, double gamma_star) {
    HHParams p(gamma);
    if (!(gamma_star > 0.0) || !std::isfinite(gamma_star)) {
      throw Error(ErrorCode::kInvalidParams, "gamma_star must be positive");
    }
    p.gamma_star_ = gamma_star;
    return p;
  }

  HHParams with_gamma_star(double gamma_star) const {
    HHParams p = for_sweep(gamma_, gamma_star);
    p.alpha_budget_ = alpha_budget_;
    return p;
  }

  double gamma() const noexcept { return gamma_; }
  double gamma_star() const noexcept { return gamma_star_; }
  double lambda() const noexcept { return gamma_ / 2.0; }
  double alpha_budget() const noexcept { return alpha_budget_; }

  /// Threshold at which the two-pass models keep exact marginals. Equal to
  /// lambda unless a sweep pushed gamma_star below it.
  double retention_threshold() const noexcept { return std::min(lambda(), gamma_star_); }

 private:
  void check_gamma() const {
    if (!(gamma_ > 0.0 && gamma_ <= 1.0)) {
      throw Error(ErrorCode::kInvalidParams, "gamma must lie in (0, 1]");
    }
  }

  double gamma_;
  double gamma_star_;
  double alpha_budget_;
};

/// A value returned by an all-subcube query together with the score it was
/// accepted on (sample frequency, marginal product, or Naive Bayes score).
struct HeavyHitter {
  JointValue value;
  double score = 0.0;

  friend bool operator==(const HeavyHitter&, const HeavyHitter&) = default;
};

inline void sort_by_value(std::vector<HeavyHitter>& hh) {
  std::sort(hh.begin(), hh.end(),
            [](const HeavyHitter& a, const HeavyHitter& b) { return a.value < b.value; });
}

}  // namespace shh
