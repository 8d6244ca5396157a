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

// One-pass heuristic with no accuracy guarantee: per-coordinate Count-Min
// point queries stand in for the exact marginals of the independence test.
// Candidates for all-subcube queries come from per-coordinate Misra-Gries
// summaries run in the same pass.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "shh/core.hpp"
#include "shh/independence.hpp"
#include "shh/sketches/count_min.hpp"
#include "shh/sketches/misra_gries.hpp"
#include "shh/stream_io.hpp"

namespace shh {

inline constexpr std::size_t kHeuristicEntryCap = 1'000'000;

class HeuristicModel {
 public:
  HeuristicModel(std::vector<CountMin> sketches, std::vector<std::vector<Code>> candidates, Count m,
                 HHParams params)
      : sketches_(std::move(sketches)), candidates_(std::move(candidates)), m_(m), params_(params) {}

  /// f~_i(x) = point_query(x) / m; never below the true f_i(x).
  double marginal_estimate(std::size_t coord, Code x) const {
    if (m_ == 0) return 0.0;
    return static_cast<double>(sketches_.at(coord).point_query(x)) / static_cast<double>(m_);
  }

  double estimate(const Subcube& t, const JointValue& v) const {
    check(t, v);
    double p = 1.0;
    for (std::size_t j = 0; j < t.size(); ++j) p *= marginal_estimate(t[j], v[j]);
    return p;
  }

  Verdict query(const Subcube& t, const JointValue& v) const { return query(t, v, params_.gamma_star()); }

  Verdict query(const Subcube& t, const JointValue& v, double threshold) const {
    return estimate(t, v) >= threshold ? Verdict::kYes : Verdict::kNo;
  }

  std::vector<HeavyHitter> all_query(const Subcube& t) const { return all_query(t, params_.gamma_star()); }

  /// Same level-by-level scheme as the exact independence model, with
  /// estimated marginals. Raises CapExceeded once the levels hold more than
  /// `cap` entries in total.
  std::vector<HeavyHitter> all_query(const Subcube& t, double threshold,
                                     std::size_t cap = kHeuristicEntryCap) const {
    if (t.size() == 0 || t.max_coord() >= sketches_.size()) {
      throw Error(ErrorCode::kIndexOutOfRange, "subcube exceeds model dimensionality");
    }
    std::vector<std::vector<std::pair<Code, double>>> ranked(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) {
      for (Code x : candidates_[t[j]]) {
        double f = marginal_estimate(t[j], x);
        if (f >= threshold) ranked[j].push_back({x, f});
      }
      std::sort(ranked[j].begin(), ranked[j].end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
      });
    }
    std::size_t total = 0;
    auto charge = [&](std::size_t n) {
      total += n;
      if (total > cap) throw Error(ErrorCode::kCapExceeded, "all-subcube search exceeded entry cap");
    };
    std::vector<std::pair<JointValue, double>> level;
    for (const auto& [x, f] : ranked[0]) {
      double p = 1.0;
      p *= f;
      level.push_back({JointValue{x}, p});
    }
    charge(level.size());
    for (std::size_t j = 1; j < t.size(); ++j) {
      std::vector<std::pair<JointValue, double>> next;
      for (const auto& [prefix, prefix_product] : level) {
        for (const auto& [x, f] : ranked[j]) {
          double p = prefix_product * f;
          if (p < threshold) break;
          JointValue extended = prefix;
          extended.values.push_back(x);
          next.push_back({std::move(extended), p});
          charge(1);
        }
      }
      level = std::move(next);
    }
    std::vector<HeavyHitter> out;
    out.reserve(level.size());
    for (auto& [v, p] : level) out.push_back({std::move(v), p});
    sort_by_value(out);
    return out;
  }

  const std::vector<Code>& candidates(std::size_t coord) const { return candidates_.at(coord); }
  const CountMin& sketch(std::size_t coord) const { return sketches_.at(coord); }
  Count m() const noexcept { return m_; }
  const HHParams& params() const noexcept { return params_; }

  /// d times the Count-Min size.
  std::uint64_t memory_slots() const {
    std::uint64_t cells = 0;
    for (const auto& s : sketches_) cells += s.cells();
    return cells;
  }

 private:
  void check(const Subcube& t, const JointValue& v) const {
    if (t.size() == 0 || t.max_coord() >= sketches_.size()) {
      throw Error(ErrorCode::kIndexOutOfRange, "subcube exceeds model dimensionality");
    }
    if (v.size() != t.size()) throw Error(ErrorCode::kDimensionMismatch, "value arity differs from subcube");
  }

  std::vector<CountMin> sketches_;
  std::vector<std::vector<Code>> candidates_;
  Count m_;
  HHParams params_;
};

/// One pass. `memory_budget` is the total number of Count-Min cells across
/// all coordinates; each coordinate gets memory_budget / d cells at `depth`
/// rows.
inline HeuristicModel heuristic_build(const Dataset& ds, std::uint64_t memory_budget, const HHParams& p,
                                      std::uint64_t seed, std::size_t depth = CountMin::kDefaultDepth) {
  const std::size_t d = ds.d();
  const std::uint64_t cells = memory_budget / d;
  if (cells / depth == 0) {
    throw Error(ErrorCode::kBudgetTooSmall, "memory budget leaves Count-Min width < 1");
  }
  std::vector<CountMin> sketches;
  sketches.reserve(d);
  for (std::size_t i = 0; i < d; ++i) {
    sketches.push_back(CountMin::from_budget(cells, splitmix64(seed + i), depth));
  }
  std::vector<MisraGries<Code>> summaries(d, MisraGries<Code>(candidate_budget(p.lambda())));
  PassSummary summary = ds.replay([&](const Item& item) {
    for (std::size_t i = 0; i < d; ++i) {
      sketches[i].update(item.values[i]);
      summaries[i].update(item.values[i]);
    }
  });
  std::vector<std::vector<Code>> candidates;
  candidates.reserve(d);
  for (const auto& mg : summaries) candidates.push_back(candidate_set(mg, p.lambda()));
  return HeuristicModel(std::move(sketches), std::move(candidates), summary.m, p);
}

}  // namespace shh
