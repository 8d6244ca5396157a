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

// Two-pass subcube heavy hitters under the Naive Bayes assumption: features
// are near-independent given an observed class coordinate with ell values.
//
//   q(v) = sum_z f_class(z) * prod_i f_{T_i|class}(v_i | z)
//
// Query(T, v) is YES iff every v_i is in S_{T_i} and q(v) reaches the
// threshold. Every prefix of a YES value also scores at least the threshold,
// which is what makes the level-by-level all-subcube search complete.

#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "shh/core.hpp"
#include "shh/independence.hpp"
#include "shh/stream_io.hpp"

namespace shh {

inline constexpr std::size_t kMaxClasses = 1024;

/// Exact class counts; prior(z) = counts[z] / m.
struct ClassPriors {
  std::vector<Count> counts;
  Count m = 0;

  std::size_t ell() const noexcept { return counts.size(); }
  double prior(std::size_t z) const {
    return static_cast<double>(counts.at(z)) / static_cast<double>(m);
  }
};

struct NBPass1 {
  ClassPriors priors;
  CandidateSets candidates;
};

inline NBPass1 nb_pass1(const Dataset& ds, const HHParams& p,
                        std::optional<std::size_t> max_counters = std::nullopt) {
  if (!ds.has_class()) throw Error(ErrorCode::kNoClassColumn, "Naive Bayes needs a class column");
  std::vector<Count> class_counts;
  auto candidates = detail::run_candidate_pass(ds, p, max_counters,
                                               [&](const Item&, std::optional<Code> cls) {
    Code z = *cls;
    if (z >= kMaxClasses) {
      throw Error(ErrorCode::kTooManyClasses, "class coordinate has more than 1024 values");
    }
    if (z >= class_counts.size()) class_counts.resize(z + 1, 0);
    ++class_counts[z];
  });
  NBPass1 out;
  out.priors.counts = std::move(class_counts);
  out.priors.m = candidates.m;
  out.candidates = std::move(candidates);
  return out;
}

/// Exact joint counts (x, z) for one stored candidate x.
struct NBEntry {
  Code value;
  std::vector<Count> class_counts;

  Count total() const { return std::accumulate(class_counts.begin(), class_counts.end(), Count{0}); }
};

/// One level W_j with cached per-class products.
struct NBPartialHH {
  struct Entry {
    JointValue prefix;
    std::vector<double> class_products;
    double score;
  };
  std::size_t level = 0;
  std::vector<Entry> entries;
};

class NBModel {
 public:
  /// `stored[i]` holds every candidate of coordinate i with its per-class
  /// counts. S_i keeps the candidates whose exact marginal reaches the
  /// retention threshold.
  NBModel(std::vector<Count> class_counts, std::vector<std::vector<NBEntry>> stored, HHParams params)
      : class_counts_(std::move(class_counts)), params_(params) {
    if (class_counts_.empty()) throw Error(ErrorCode::kEmpty, "no classes");
    if (class_counts_.size() > kMaxClasses) throw Error(ErrorCode::kTooManyClasses, "ell > 1024");
    m_ = std::accumulate(class_counts_.begin(), class_counts_.end(), Count{0});
    priors_.resize(class_counts_.size());
    for (std::size_t z = 0; z < ell(); ++z) {
      priors_[z] = static_cast<double>(class_counts_[z]) / static_cast<double>(m_);
    }
    const double retain = params_.retention_threshold();
    coords_.resize(stored.size());
    for (std::size_t i = 0; i < stored.size(); ++i) {
      Coord& c = coords_[i];
      for (NBEntry& e : stored[i]) {
        if (e.class_counts.size() != ell()) {
          throw Error(ErrorCode::kDimensionMismatch, "per-class counts must have ell entries");
        }
        Stored s;
        s.value = e.value;
        s.class_counts = std::move(e.class_counts);
        s.count = std::accumulate(s.class_counts.begin(), s.class_counts.end(), Count{0});
        s.freq = static_cast<double>(s.count) / static_cast<double>(m_);
        s.conditionals.resize(ell());
        for (std::size_t z = 0; z < ell(); ++z) {
          s.conditionals[z] = class_counts_[z] == 0 ? 0.0
                                                    : static_cast<double>(s.class_counts[z]) /
                                                          static_cast<double>(class_counts_[z]);
        }
        c.index.emplace(s.value, c.stored.size());
        c.stored.push_back(std::move(s));
      }
      for (std::size_t r = 0; r < c.stored.size(); ++r) {
        if (c.stored[r].count > 0 && c.stored[r].freq >= retain) c.heavy.push_back(r);
      }
      std::sort(c.heavy.begin(), c.heavy.end(), [&](std::size_t a, std::size_t b) {
        const Stored& sa = c.stored[a];
        const Stored& sb = c.stored[b];
        return sa.count != sb.count ? sa.count > sb.count : sa.value < sb.value;
      });
    }
  }

  std::size_t ell() const noexcept { return class_counts_.size(); }
  std::size_t d() const noexcept { return coords_.size(); }
  Count m() const noexcept { return m_; }
  double prior(std::size_t z) const { return priors_.at(z); }
  const std::vector<Count>& class_counts() const noexcept { return class_counts_; }
  const HHParams& params() const noexcept { return params_; }

  /// f_{i|class}(x|z) for a stored candidate x; nullopt if x was not stored.
  std::optional<double> conditional(std::size_t coord, Code x, std::size_t z) const {
    const Stored* s = find(coord, x);
    if (!s) return std::nullopt;
    return s->conditionals.at(z);
  }

  /// Exact f_i(x) for a stored candidate.
  std::optional<double> marginal(std::size_t coord, Code x) const {
    const Stored* s = find(coord, x);
    if (!s) return std::nullopt;
    return s->freq;
  }

  bool in_heavy_set(std::size_t coord, Code x) const {
    const Stored* s = find(coord, x);
    return s && s->count > 0 && s->freq >= params_.retention_threshold();
  }

  /// Values of S_i, descending by frequency.
  std::vector<Code> heavy_set(std::size_t coord) const {
    std::vector<Code> out;
    for (std::size_t r : coords_.at(coord).heavy) out.push_back(coords_[coord].stored[r].value);
    return out;
  }

  /// q(v), or nullopt when some v_i is outside S_{T_i}.
  std::optional<double> score(const Subcube& t, const JointValue& v) const {
    check(t, v);
    std::vector<const Stored*> parts;
    parts.reserve(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) {
      if (!in_heavy_set(t[j], v[j])) return std::nullopt;
      parts.push_back(find(t[j], v[j]));
    }
    std::vector<double> products(ell(), 1.0);
    for (const Stored* s : parts) extend(products, *s);
    return combine(products);
  }

  double estimate(const Subcube& t, const JointValue& v) const { return score(t, v).value_or(0.0); }

  Verdict query(const Subcube& t, const JointValue& v) const { return query(t, v, params_.gamma_star()); }

  Verdict query(const Subcube& t, const JointValue& v, double threshold) const {
    auto q = score(t, v);
    return q && *q >= threshold ? Verdict::kYes : Verdict::kNo;
  }

  std::vector<HeavyHitter> all_query(const Subcube& t) const { return all_query(t, params_.gamma_star()); }

  std::vector<HeavyHitter> all_query(const Subcube& t, double threshold) const {
    auto levels = all_query_levels(t, threshold);
    std::vector<HeavyHitter> out;
    out.reserve(levels.back().entries.size());
    for (auto& e : levels.back().entries) out.push_back({std::move(e.prefix), e.score});
    sort_by_value(out);
    return out;
  }

  /// W_1, ..., W_k. Every (y, x) in W_j x S_{T_{j+1}} is scored by extending
  /// the cached per-class products of y: O(ell) per pair.
  std::vector<NBPartialHH> all_query_levels(const Subcube& t, double threshold) const {
    check_subcube(t);
    std::vector<NBPartialHH> levels;
    NBPartialHH w;
    w.level = 1;
    for (std::size_t r : coords_[t[0]].heavy) {
      const Stored& s = coords_[t[0]].stored[r];
      std::vector<double> products(ell(), 1.0);
      extend(products, s);
      double q = combine(products);
      if (q >= threshold) w.entries.push_back({JointValue{s.value}, std::move(products), q});
    }
    levels.push_back(std::move(w));
    for (std::size_t j = 1; j < t.size(); ++j) {
      NBPartialHH next;
      next.level = j + 1;
      const Coord& c = coords_[t[j]];
      for (const auto& e : levels.back().entries) {
        for (std::size_t r : c.heavy) {
          std::vector<double> products = e.class_products;
          extend(products, c.stored[r]);
          double q = combine(products);
          if (q < threshold) continue;
          JointValue extended = e.prefix;
          extended.values.push_back(c.stored[r].value);
          next.entries.push_back({std::move(extended), std::move(products), q});
        }
      }
      levels.push_back(std::move(next));
    }
    return levels;
  }

  /// Checks, in integer arithmetic, that the stored tables are consistent:
  /// class counts sum to m; for each coordinate and class the stored joint
  /// counts do not exceed the class count; and sum_z prior(z) f(x|z) = f(x),
  /// i.e. sum_z count(x, z) = count(x) for every stored x.
  bool verify_identities() const {
    if (std::accumulate(class_counts_.begin(), class_counts_.end(), Count{0}) != m_) return false;
    for (const Coord& c : coords_) {
      std::vector<Count> per_class(ell(), 0);
      for (const Stored& s : c.stored) {
        Count sum = 0;
        for (std::size_t z = 0; z < ell(); ++z) {
          sum += s.class_counts[z];
          per_class[z] += s.class_counts[z];
        }
        if (sum != s.count) return false;
      }
      for (std::size_t z = 0; z < ell(); ++z) {
        if (per_class[z] > class_counts_[z]) return false;
      }
    }
    return true;
  }

 private:
  struct Stored {
    Code value;
    Count count;
    double freq;
    std::vector<Count> class_counts;
    std::vector<double> conditionals;
  };

  struct Coord {
    std::vector<Stored> stored;
    std::unordered_map<Code, std::size_t> index;
    std::vector<std::size_t> heavy;  // indices into stored, S_i order
  };

  const Stored* find(std::size_t coord, Code x) const {
    const Coord& c = coords_.at(coord);
    auto it = c.index.find(x);
    return it == c.index.end() ? nullptr : &c.stored[it->second];
  }

  void extend(std::vector<double>& products, const Stored& s) const {
    for (std::size_t z = 0; z < ell(); ++z) products[z] *= s.conditionals[z];
  }

  double combine(const std::vector<double>& products) const {
    double q = 0.0;
    for (std::size_t z = 0; z < ell(); ++z) q += priors_[z] * products[z];
    return q;
  }

  void check_subcube(const Subcube& t) const {
    if (t.size() == 0 || t.max_coord() >= coords_.size()) {
      throw Error(ErrorCode::kIndexOutOfRange, "subcube exceeds model dimensionality");
    }
  }

  void check(const Subcube& t, const JointValue& v) const {
    check_subcube(t);
    if (v.size() != t.size()) throw Error(ErrorCode::kDimensionMismatch, "value arity differs from subcube");
  }

  std::vector<Count> class_counts_;
  Count m_ = 0;
  std::vector<double> priors_;
  HHParams params_;
  std::vector<Coord> coords_;
};

inline NBModel nb_pass2(const Dataset& ds, const NBPass1& pass1, const HHParams& p) {
  const CandidateSets& c = pass1.candidates;
  if (c.per_coord.size() != ds.d()) {
    throw Error(ErrorCode::kDimensionMismatch, "candidate sets do not match dataset dimensionality");
  }
  const std::size_t ell = pass1.priors.ell();
  std::vector<std::unordered_map<Code, std::vector<Count>>> joint(ds.d());
  for (std::size_t i = 0; i < ds.d(); ++i) {
    for (Code x : c.per_coord[i]) joint[i].emplace(x, std::vector<Count>(ell, 0));
  }
  std::vector<Count> class_counts(ell, 0);
  PassSummary summary = ds.replay([&](const Item& item, std::optional<Code> cls) {
    Code z = *cls;
    if (z >= ell) throw Error(ErrorCode::kIngestInconsistency, "class unseen in pass 1");
    ++class_counts[z];
    for (std::size_t i = 0; i < item.size(); ++i) {
      if (auto it = joint[i].find(item.values[i]); it != joint[i].end()) ++it->second[z];
    }
  });
  if (summary.m != c.m || class_counts != pass1.priors.counts) {
    throw Error(ErrorCode::kIngestInconsistency, "pass-2 stream differs from pass 1");
  }
  std::vector<std::vector<NBEntry>> stored(ds.d());
  for (std::size_t i = 0; i < ds.d(); ++i) {
    for (Code x : c.per_coord[i]) stored[i].push_back({x, std::move(joint[i].at(x))});
  }
  return NBModel(pass1.priors.counts, std::move(stored), p);
}

inline NBModel build_naive_bayes(const Dataset& ds, const HHParams& p,
                                 std::optional<std::size_t> max_counters = std::nullopt) {
  return nb_pass2(ds, nb_pass1(ds, p, max_counters), p);
}

}  // namespace shh
