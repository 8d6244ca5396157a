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

// Two-pass subcube heavy hitters under near-independence.
//
// Pass 1 runs one Misra-Gries summary per coordinate to find candidates H_i.
// Pass 2 counts candidates exactly; S_i keeps those with f_i >= lambda.
// Query(T, v) answers YES iff every v_i is in S_{T_i} and the product of the
// exact marginals reaches the decision threshold.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "shh/core.hpp"
#include "shh/sketches/misra_gries.hpp"
#include "shh/stream_io.hpp"

namespace shh {

/// Counter budget that makes the candidate promise deterministic:
/// ceil(8 / lambda) bounds the Misra-Gries error by lambda * m / 8.
inline std::size_t candidate_budget(double lambda) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::kInvalidParams, "lambda must be positive");
  return static_cast<std::size_t>(std::ceil(8.0 / lambda));
}

/// Estimate ratio a tracked value needs to enter H_i. 3*lambda/8 for the
/// full budget; lowered to lambda/2 - 1/budget under a tighter memory cap so
/// values with f >= lambda/2 are never dropped.
inline double candidate_threshold(double lambda, std::size_t budget) {
  double t = std::min(3.0 * lambda / 8.0, lambda / 2.0 - 1.0 / static_cast<double>(budget));
  return std::max(0.0, t);
}

/// H_i from a finished Misra-Gries summary, ascending by value.
template <typename Key>
std::vector<Key> candidate_set(const MisraGries<Key>& mg, double lambda) {
  std::vector<Key> out;
  if (mg.processed() == 0) return out;
  const double m = static_cast<double>(mg.processed());
  const double threshold = candidate_threshold(lambda, mg.budget());
  for (const auto& [x, est] : mg.entries()) {
    if (static_cast<double>(est) / m >= threshold) out.push_back(x);
  }
  return out;
}

/// Per-coordinate candidate sets H_i. Guarantee (full budget):
/// f_i(x) >= lambda/2 implies x in H_i; f_i(x) < lambda/4 implies x not in H_i.
struct CandidateSets {
  std::vector<std::vector<Code>> per_coord;
  Count m = 0;
  std::size_t budget = 0;

  bool contains(std::size_t coord, Code x) const {
    const auto& h = per_coord[coord];
    return std::binary_search(h.begin(), h.end(), x);
  }
};

/// Budget for a pass-1 summary: the deterministic budget, unless a memory
/// cap of `max_counters` per coordinate is tighter.
inline std::size_t pass1_budget(const HHParams& p, std::optional<std::size_t> max_counters) {
  std::size_t budget = candidate_budget(p.lambda());
  if (max_counters) {
    if (*max_counters == 0) throw Error(ErrorCode::kBudgetTooSmall, "no room for any counter");
    budget = std::min(budget, *max_counters);
  }
  return budget;
}

namespace detail {

template <typename Visit>
CandidateSets run_candidate_pass(const Dataset& ds, const HHParams& p,
                                 std::optional<std::size_t> max_counters, Visit&& extra) {
  const std::size_t budget = pass1_budget(p, max_counters);
  std::vector<MisraGries<Code>> sketches(ds.d(), MisraGries<Code>(budget));
  PassSummary summary = ds.replay([&](const Item& item, std::optional<Code> cls) {
    for (std::size_t i = 0; i < item.size(); ++i) sketches[i].update(item.values[i]);
    extra(item, cls);
  });
  CandidateSets c;
  c.m = summary.m;
  c.budget = budget;
  c.per_coord.reserve(ds.d());
  for (const auto& mg : sketches) c.per_coord.push_back(candidate_set(mg, p.lambda()));
  return c;
}

}  // namespace detail

inline CandidateSets indep_pass1(const Dataset& ds, const HHParams& p,
                                 std::optional<std::size_t> max_counters = std::nullopt) {
  return detail::run_candidate_pass(ds, p, max_counters, [](const Item&, std::optional<Code>) {});
}

/// Exact marginal of one heavy value.
struct MarginalEntry {
  Code value;
  Count count;
  double freq;
};

/// One level W_j of the iterative all-subcube construction.
struct PartialHH {
  std::size_t level = 0;
  std::vector<std::pair<JointValue, double>> entries;
};

class IndepModel {
 public:
  /// Builds S_i from exact counts: keeps entries with count / m at or above
  /// the retention threshold and sorts them by frequency, descending.
  IndepModel(std::vector<std::vector<std::pair<Code, Count>>> exact_counts, Count m, HHParams params)
      : m_(m), params_(params) {
    const double retain = params_.retention_threshold();
    heavy_.resize(exact_counts.size());
    index_.resize(exact_counts.size());
    for (std::size_t i = 0; i < exact_counts.size(); ++i) {
      for (const auto& [x, c] : exact_counts[i]) {
        double f = m_ == 0 ? 0.0 : static_cast<double>(c) / static_cast<double>(m_);
        if (c > 0 && f >= retain) heavy_[i].push_back({x, c, f});
      }
      std::sort(heavy_[i].begin(), heavy_[i].end(), [](const MarginalEntry& a, const MarginalEntry& b) {
        return a.count != b.count ? a.count > b.count : a.value < b.value;
      });
      for (std::size_t r = 0; r < heavy_[i].size(); ++r) index_[i].emplace(heavy_[i][r].value, r);
    }
  }

  /// S_i, sorted by frequency descending.
  const std::vector<MarginalEntry>& heavy_set(std::size_t coord) const { return heavy_.at(coord); }

  std::optional<double> marginal(std::size_t coord, Code x) const {
    const auto& idx = index_.at(coord);
    auto it = idx.find(x);
    if (it == idx.end()) return std::nullopt;
    return heavy_[coord][it->second].freq;
  }

  /// prod_i f_{T_i}(v_i), or nullopt if some v_i is not in S_{T_i}.
  std::optional<double> product(const Subcube& t, const JointValue& v) const {
    check(t, v);
    double p = 1.0;
    for (std::size_t j = 0; j < t.size(); ++j) {
      auto f = marginal(t[j], v[j]);
      if (!f) return std::nullopt;
      p *= *f;
    }
    return p;
  }

  /// Frequency estimate used by error metrics: the product, 0 when absent.
  double estimate(const Subcube& t, const JointValue& v) const { return product(t, v).value_or(0.0); }

  Verdict query(const Subcube& t, const JointValue& v) const {
    return query(t, v, params_.gamma_star());
  }

  Verdict query(const Subcube& t, const JointValue& v, double threshold) const {
    auto p = product(t, v);
    return p && *p >= threshold ? Verdict::kYes : Verdict::kNo;
  }

  std::vector<HeavyHitter> all_query(const Subcube& t) const { return all_query(t, params_.gamma_star()); }

  std::vector<HeavyHitter> all_query(const Subcube& t, double threshold) const {
    auto levels = all_query_levels(t, threshold);
    std::vector<HeavyHitter> out;
    out.reserve(levels.back().entries.size());
    for (auto& [v, p] : levels.back().entries) out.push_back({std::move(v), p});
    sort_by_value(out);
    return out;
  }

  /// W_1, ..., W_k. W_{j+1} extends each prefix y in W_j by scanning
  /// S_{T_{j+1}} in descending frequency and stopping at the first value
  /// whose product falls below the threshold.
  std::vector<PartialHH> all_query_levels(const Subcube& t, double threshold) const {
    check_subcube(t);
    std::vector<PartialHH> levels;
    PartialHH w;
    w.level = 1;
    for (const auto& e : heavy_[t[0]]) {
      double p = 1.0;
      p *= e.freq;
      if (p >= threshold) w.entries.push_back({JointValue{e.value}, p});
    }
    levels.push_back(std::move(w));
    for (std::size_t j = 1; j < t.size(); ++j) {
      PartialHH next;
      next.level = j + 1;
      for (const auto& [prefix, prefix_product] : levels.back().entries) {
        for (const auto& e : heavy_[t[j]]) {
          double p = prefix_product * e.freq;
          if (p < threshold) break;
          JointValue extended = prefix;
          extended.values.push_back(e.value);
          next.entries.push_back({std::move(extended), p});
        }
      }
      levels.push_back(std::move(next));
    }
    return levels;
  }

  std::size_t d() const noexcept { return heavy_.size(); }
  Count m() const noexcept { return m_; }
  const HHParams& params() const noexcept { return params_; }

 private:
  void check_subcube(const Subcube& t) const {
    if (t.size() == 0 || t.max_coord() >= heavy_.size()) {
      throw Error(ErrorCode::kIndexOutOfRange, "subcube exceeds model dimensionality");
    }
  }

  void check(const Subcube& t, const JointValue& v) const {
    check_subcube(t);
    if (v.size() != t.size()) throw Error(ErrorCode::kDimensionMismatch, "value arity differs from subcube");
  }

  Count m_;
  HHParams params_;
  std::vector<std::vector<MarginalEntry>> heavy_;
  std::vector<std::unordered_map<Code, std::size_t>> index_;
};

/// Exact counts for every candidate, then S_i. Raises IngestInconsistency if
/// the stream length differs from pass 1.
inline IndepModel indep_pass2(const Dataset& ds, const CandidateSets& c, const HHParams& p) {
  if (c.per_coord.size() != ds.d()) {
    throw Error(ErrorCode::kDimensionMismatch, "candidate sets do not match dataset dimensionality");
  }
  std::vector<std::unordered_map<Code, Count>> exact(ds.d());
  for (std::size_t i = 0; i < ds.d(); ++i) {
    for (Code x : c.per_coord[i]) exact[i].emplace(x, 0);
  }
  PassSummary summary = ds.replay([&](const Item& item) {
    for (std::size_t i = 0; i < item.size(); ++i) {
      if (auto it = exact[i].find(item.values[i]); it != exact[i].end()) ++it->second;
    }
  });
  if (summary.m != c.m) throw Error(ErrorCode::kIngestInconsistency, "pass-2 stream length differs");
  std::vector<std::vector<std::pair<Code, Count>>> counts(ds.d());
  for (std::size_t i = 0; i < ds.d(); ++i) {
    counts[i].assign(exact[i].begin(), exact[i].end());
    std::sort(counts[i].begin(), counts[i].end());
  }
  return IndepModel(std::move(counts), summary.m, p);
}

/// Both passes. `max_counters` caps the per-coordinate counter budget.
inline IndepModel build_independence(const Dataset& ds, const HHParams& p,
                                     std::optional<std::size_t> max_counters = std::nullopt) {
  return indep_pass2(ds, indep_pass1(ds, p, max_counters), p);
}

/// Accounted memory of the two-pass models: one slot per counter per
/// coordinate. Pass-2 exact counters reuse the H_i slots.
inline std::uint64_t two_pass_memory_slots(std::size_t d, std::size_t budget) {
  return static_cast<std::uint64_t>(d) * budget;
}

}  // namespace shh
