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

// Exact, brute-force ground truth. Slow and right: every algorithm in the
// library is tested against these functions.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "shh/core.hpp"
#include "shh/stream_io.hpp"

namespace shh {

/// Exact joint counts c_T(v) for one subcube.
struct GroundTruth {
  Subcube subcube;
  Count m = 0;
  std::map<JointValue, Count> counts;

  Count count(const JointValue& v) const {
    auto it = counts.find(v);
    return it == counts.end() ? 0 : it->second;
  }

  double frequency(const JointValue& v) const {
    return m == 0 ? 0.0 : static_cast<double>(count(v)) / static_cast<double>(m);
  }

  /// { v : f_T(v) >= threshold }, in value order.
  std::vector<JointValue> at_least(double threshold) const {
    std::vector<JointValue> out;
    for (const auto& [v, c] : counts) {
      if (static_cast<double>(c) / static_cast<double>(m) >= threshold) out.push_back(v);
    }
    return out;
  }

  /// The `k` most frequent values, ties broken by value order.
  std::vector<std::pair<JointValue, Count>> top(std::size_t k) const {
    std::vector<std::pair<JointValue, Count>> all(counts.begin(), counts.end());
    std::stable_sort(all.begin(), all.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    if (all.size() > k) all.resize(k);
    return all;
  }
};

/// One pass computing exact tables for several subcubes at once.
inline std::vector<GroundTruth> exact_tables(const Dataset& ds, std::span<const Subcube> subcubes) {
  std::vector<GroundTruth> out(subcubes.size());
  for (std::size_t s = 0; s < subcubes.size(); ++s) {
    if (subcubes[s].max_coord() >= ds.d()) {
      throw Error(ErrorCode::kIndexOutOfRange, "subcube exceeds dataset dimensionality");
    }
    out[s].subcube = subcubes[s];
  }
  PassSummary summary = ds.replay([&](const Item& item) {
    for (auto& gt : out) ++gt.counts[project(item, gt.subcube)];
  });
  for (auto& gt : out) gt.m = summary.m;
  return out;
}

inline GroundTruth exact_table(const Dataset& ds, const Subcube& t) {
  return exact_tables(ds, std::span<const Subcube>(&t, 1)).front();
}

enum class TruthLabel { kMustYes, kMustNo, kEither };

inline const char* to_string(TruthLabel l) {
  switch (l) {
    case TruthLabel::kMustYes: return "MUST_YES";
    case TruthLabel::kMustNo: return "MUST_NO";
    case TruthLabel::kEither: return "EITHER";
  }
  return "?";
}

inline TruthLabel truth_label(double f, const HHParams& p) {
  if (f >= p.gamma()) return TruthLabel::kMustYes;
  if (f < p.gamma() / 4.0) return TruthLabel::kMustNo;
  return TruthLabel::kEither;
}

inline constexpr std::uint64_t kDefaultSupportCap = 10'000'000;

namespace detail {

/// Visits every tuple of the cartesian product of `supports` in
/// lexicographic order.
template <typename Fn>
void for_each_in_product(const std::vector<std::vector<Code>>& supports, std::uint64_t cap, Fn&& fn) {
  long double size = 1;
  for (const auto& s : supports) size *= static_cast<long double>(s.size());
  if (size > static_cast<long double>(cap)) {
    throw Error(ErrorCode::kSupportTooLarge, "support product exceeds cap");
  }
  if (size == 0) return;
  std::vector<std::size_t> idx(supports.size(), 0);
  JointValue v;
  v.values.resize(supports.size());
  while (true) {
    for (std::size_t j = 0; j < supports.size(); ++j) v.values[j] = supports[j][idx[j]];
    fn(v);
    std::size_t j = supports.size();
    while (j > 0) {
      --j;
      if (++idx[j] < supports[j].size()) break;
      idx[j] = 0;
      if (j == 0) return;
    }
  }
}

/// Per-coordinate counts and observed supports for the coordinates of `t`.
struct MarginalCounts {
  std::vector<std::map<Code, Count>> counts;
  std::vector<std::vector<Code>> supports;
};

inline MarginalCounts marginal_counts(const GroundTruth& gt) {
  MarginalCounts mc;
  mc.counts.resize(gt.subcube.size());
  for (const auto& [v, c] : gt.counts) {
    for (std::size_t j = 0; j < v.size(); ++j) mc.counts[j][v[j]] += c;
  }
  mc.supports.resize(gt.subcube.size());
  for (std::size_t j = 0; j < mc.counts.size(); ++j) {
    for (const auto& [x, c] : mc.counts[j]) mc.supports[j].push_back(x);
  }
  return mc;
}

}  // namespace detail

/// Max over v in the product of observed supports of
/// |f_T(v) - prod_i f_{T_i}(v_i)|, unobserved v counting as f_T(v) = 0.
inline double empirical_alpha_independence(const Dataset& ds, const Subcube& t,
                                           std::uint64_t cap = kDefaultSupportCap) {
  GroundTruth gt = exact_table(ds, t);
  auto mc = detail::marginal_counts(gt);
  const double m = static_cast<double>(gt.m);
  double worst = 0.0;
  detail::for_each_in_product(mc.supports, cap, [&](const JointValue& v) {
    double product = 1.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      product *= static_cast<double>(mc.counts[j].at(v[j])) / m;
    }
    worst = std::max(worst, std::abs(gt.frequency(v) - product));
  });
  return worst;
}

/// Max over v of |f_T(v) - sum_z f_class(z) prod_i f_{T_i|class}(v_i|z)|.
inline double empirical_alpha_nb(const Dataset& ds, const Subcube& t,
                                 std::uint64_t cap = kDefaultSupportCap) {
  if (!ds.has_class()) throw Error(ErrorCode::kNoClassColumn, "dataset has no class column");
  if (t.max_coord() >= ds.d()) {
    throw Error(ErrorCode::kIndexOutOfRange, "subcube exceeds dataset dimensionality");
  }
  std::map<JointValue, Count> joint;
  std::vector<Count> class_counts;
  // cond[j][z][x] = count of (X_{T_j} = x, class = z)
  std::vector<std::vector<std::map<Code, Count>>> cond(t.size());
  std::vector<std::map<Code, Count>> marginal(t.size());
  Count m = 0;
  ds.replay([&](const Item& item, std::optional<Code> cls) {
    Code z = *cls;
    if (z >= class_counts.size()) {
      class_counts.resize(z + 1, 0);
      for (auto& c : cond) c.resize(z + 1);
    }
    ++class_counts[z];
    JointValue v = project(item, t);
    ++joint[v];
    for (std::size_t j = 0; j < t.size(); ++j) {
      ++cond[j][z][v[j]];
      ++marginal[j][v[j]];
    }
    ++m;
  });
  std::vector<std::vector<Code>> supports(t.size());
  for (std::size_t j = 0; j < t.size(); ++j) {
    for (const auto& [x, c] : marginal[j]) supports[j].push_back(x);
  }
  const double md = static_cast<double>(m);
  double worst = 0.0;
  detail::for_each_in_product(supports, cap, [&](const JointValue& v) {
    double q = 0.0;
    for (std::size_t z = 0; z < class_counts.size(); ++z) {
      if (class_counts[z] == 0) continue;
      const double nz = static_cast<double>(class_counts[z]);
      double p = 1.0;
      for (std::size_t j = 0; j < v.size() && p > 0.0; ++j) {
        auto it = cond[j][z].find(v[j]);
        p *= it == cond[j][z].end() ? 0.0 : static_cast<double>(it->second) / nz;
      }
      q += (nz / md) * p;
    }
    auto it = joint.find(v);
    double f = it == joint.end() ? 0.0 : static_cast<double>(it->second) / md;
    worst = std::max(worst, std::abs(f - q));
  });
  return worst;
}

}  // namespace shh
