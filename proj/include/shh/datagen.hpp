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

// Synthetic categorical data drawn from a seeded Naive Bayes model.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "shh/core.hpp"

namespace shh {

/// Vose's alias method: O(n) build, O(1) draw.
class AliasTable {
 public:
  AliasTable() = default;

  explicit AliasTable(const std::vector<double>& probs) : prob_(probs.size()), alias_(probs.size()) {
    const std::size_t n = probs.size();
    if (n == 0) throw Error(ErrorCode::kInvalidArgument, "empty distribution");
    std::vector<double> scaled(n);
    for (std::size_t i = 0; i < n; ++i) scaled[i] = probs[i] * static_cast<double>(n);
    std::vector<std::size_t> small, large;
    for (std::size_t i = n; i-- > 0;) (scaled[i] < 1.0 ? small : large).push_back(i);
    while (!small.empty() && !large.empty()) {
      std::size_t s = small.back();
      small.pop_back();
      std::size_t l = large.back();
      large.pop_back();
      prob_[s] = scaled[s];
      alias_[s] = static_cast<Code>(l);
      scaled[l] = (scaled[l] + scaled[s]) - 1.0;
      (scaled[l] < 1.0 ? small : large).push_back(l);
    }
    for (std::size_t i : large) prob_[i] = 1.0;
    for (std::size_t i : small) prob_[i] = 1.0;
  }

  template <typename Rng>
  Code sample(Rng& rng) const {
    std::uniform_int_distribution<std::size_t> column(0, prob_.size() - 1);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::size_t i = column(rng);
    return coin(rng) < prob_[i] ? static_cast<Code>(i) : alias_[i];
  }

  std::size_t size() const noexcept { return prob_.size(); }

 private:
  std::vector<double> prob_;
  std::vector<Code> alias_;
};

/// Naive Bayes generative model: class z ~ class_prior, then each feature
/// independently from its class-conditional distribution.
class NBGenerator {
 public:
  NBGenerator(std::vector<double> class_prior, std::vector<std::vector<std::vector<double>>> conditionals,
              std::uint64_t seed)
      : class_prior_(std::move(class_prior)), conditionals_(std::move(conditionals)), seed_(seed) {
    if (class_prior_.empty()) throw Error(ErrorCode::kInvalidArgument, "need at least one class");
    if (conditionals_.size() != class_prior_.size()) {
      throw Error(ErrorCode::kDimensionMismatch, "one conditional table per class required");
    }
    check_distribution(class_prior_);
    const std::size_t d = conditionals_.front().size();
    for (const auto& per_class : conditionals_) {
      if (per_class.size() != d) throw Error(ErrorCode::kDimensionMismatch, "classes differ in d");
      for (std::size_t i = 0; i < d; ++i) {
        if (per_class[i].size() != conditionals_.front()[i].size()) {
          throw Error(ErrorCode::kDimensionMismatch, "classes differ in cardinality");
        }
        check_distribution(per_class[i]);
      }
    }
    class_table_ = AliasTable(class_prior_);
    tables_.resize(ell());
    for (std::size_t z = 0; z < ell(); ++z) {
      for (const auto& dist : conditionals_[z]) tables_[z].emplace_back(dist);
    }
  }

  std::size_t ell() const noexcept { return class_prior_.size(); }
  std::size_t d() const noexcept { return conditionals_.front().size(); }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::vector<double>& class_prior() const noexcept { return class_prior_; }

  /// P(X_coord = x | class = z) for every x.
  const std::vector<double>& conditional(std::size_t z, std::size_t coord) const {
    return conditionals_.at(z).at(coord);
  }

  std::vector<std::size_t> cardinalities() const {
    std::vector<std::size_t> out;
    for (const auto& dist : conditionals_.front()) out.push_back(dist.size());
    return out;
  }

  std::size_t most_likely_class() const {
    return static_cast<std::size_t>(
        std::max_element(class_prior_.begin(), class_prior_.end()) - class_prior_.begin());
  }

  template <typename Rng>
  Code draw_class(Rng& rng) const {
    return class_table_.sample(rng);
  }

  template <typename Rng>
  void draw_features(Rng& rng, std::size_t z, Item& out) const {
    out.values.resize(d());
    for (std::size_t i = 0; i < d(); ++i) out.values[i] = tables_[z][i].sample(rng);
  }

 private:
  static void check_distribution(const std::vector<double>& p) {
    double sum = 0.0;
    for (double x : p) {
      if (!(x >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "negative probability");
      sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw Error(ErrorCode::kInvalidArgument, "probabilities must sum to 1");
  }

  std::vector<double> class_prior_;
  std::vector<std::vector<std::vector<double>>> conditionals_;
  std::uint64_t seed_;
  AliasTable class_table_;
  std::vector<std::vector<AliasTable>> tables_;
};

namespace detail {

inline void normalize(std::vector<double>& w) {
  // Two passes keep the sum within 1e-12 of 1 even for long vectors.
  for (int pass = 0; pass < 2; ++pass) {
    long double sum = 0;
    for (double x : w) sum += x;
    for (double& x : w) x = static_cast<double>(x / sum);
  }
}

}  // namespace detail

/// Random model with `cardinalities.size()` features and `ell` classes.
///
/// Class prior is Dirichlet(1). Each class-conditional is a Zipf law with
/// exponent `skew` over a class-specific random permutation of the values:
/// skew 0 is uniform, larger skew concentrates mass on a few heavy values.
inline NBGenerator make_random_nb(const std::vector<std::size_t>& cardinalities, std::size_t ell,
                                  double skew, std::uint64_t seed) {
  if (!(skew >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "skew must be >= 0");
  if (ell == 0) throw Error(ErrorCode::kInvalidArgument, "ell must be >= 1");
  if (cardinalities.empty()) throw Error(ErrorCode::kInvalidArgument, "need at least one feature");
  std::mt19937_64 rng(seed);
  std::vector<double> prior(ell, 1.0);
  if (ell > 1) {
    std::exponential_distribution<double> expo(1.0);
    for (double& p : prior) p = expo(rng);
  }
  detail::normalize(prior);
  std::vector<std::vector<std::vector<double>>> cond(ell);
  for (std::size_t z = 0; z < ell; ++z) {
    for (std::size_t n : cardinalities) {
      if (n == 0) throw Error(ErrorCode::kInvalidArgument, "cardinality must be >= 1");
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      std::shuffle(perm.begin(), perm.end(), rng);
      std::vector<double> dist(n);
      for (std::size_t rank = 0; rank < n; ++rank) {
        dist[perm[rank]] = std::pow(static_cast<double>(rank + 1), -skew);
      }
      detail::normalize(dist);
      cond[z].push_back(std::move(dist));
    }
  }
  return NBGenerator(std::move(prior), std::move(cond), seed);
}

/// Feature cardinalities of the clickstream-like profile: city, page name,
/// starting page name, campaign, browser. The class coordinate (country) has
/// 7 values.
inline const std::vector<std::size_t>& clickstream_cardinalities() {
  static const std::vector<std::size_t> kCards = {10500, 8500, 6400, 3500, 300};
  return kCards;
}

inline constexpr std::size_t kClickstreamClasses = 7;
inline constexpr double kClickstreamSkew = 1.15;

inline NBGenerator clickstream_profile(std::uint64_t seed, double skew = kClickstreamSkew) {
  return make_random_nb(clickstream_cardinalities(), kClickstreamClasses, skew, seed);
}

/// m i.i.d. draws. With `fix_class`, every record is drawn from that class's
/// conditionals and `classes` is left empty.
struct GeneratedData {
  std::vector<Item> items;
  std::vector<Code> classes;
};

inline GeneratedData sample(const NBGenerator& g, std::uint64_t m, std::uint64_t seed,
                            std::optional<std::size_t> fix_class = std::nullopt) {
  if (m == 0) throw Error(ErrorCode::kInvalidArgument, "m must be >= 1");
  if (fix_class && *fix_class >= g.ell()) throw Error(ErrorCode::kInvalidArgument, "no such class");
  std::mt19937_64 rng(seed);
  GeneratedData out;
  out.items.resize(m);
  if (!fix_class) out.classes.resize(m);
  for (std::uint64_t r = 0; r < m; ++r) {
    std::size_t z = fix_class ? *fix_class : g.draw_class(rng);
    if (!fix_class) out.classes[r] = static_cast<Code>(z);
    g.draw_features(rng, z, out.items[r]);
  }
  return out;
}

/// CSV without header. Whole-model rows put the class first; fixed-class
/// rows carry features only.
inline void write_csv(const GeneratedData& data, std::ostream& out) {
  std::string line;
  for (std::size_t r = 0; r < data.items.size(); ++r) {
    line.clear();
    if (!data.classes.empty()) {
      line += std::to_string(data.classes[r]);
      line += ',';
    }
    const auto& values = data.items[r].values;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) line += ',';
      line += std::to_string(values[i]);
    }
    line += '\n';
    out << line;
  }
}

}  // namespace shh
