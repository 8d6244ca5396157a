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

// One-pass sampling baseline: keep a uniform reservoir of m' items and
// answer every query from the sample frequencies.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>
#include <vector>

#include "shh/core.hpp"
#include "shh/sketches/reservoir.hpp"
#include "shh/stream_io.hpp"

namespace shh {

/// ceil(48 / gamma * ln(10 * d^k * n_max^k)). The constant 48 = 3 * 16 makes
/// both Chernoff tails at most 1 / (10 d^k n^k). Evaluated in log space.
inline std::uint64_t required_sample_size(const HHParams& p, std::size_t d, std::size_t k,
                                          std::size_t n_max) {
  if (k == 0 || k > d) throw Error(ErrorCode::kInvalidArgument, "need 1 <= k <= d");
  if (n_max == 0) throw Error(ErrorCode::kInvalidArgument, "n_max must be >= 1");
  const long double kd = static_cast<long double>(k);
  const long double log_term = std::log(10.0L) + kd * std::log(static_cast<long double>(d)) +
                               kd * std::log(static_cast<long double>(n_max));
  const long double m = std::ceil(48.0L / static_cast<long double>(p.gamma()) * log_term);
  if (!(m < static_cast<long double>(std::numeric_limits<std::uint64_t>::max()))) {
    throw Error(ErrorCode::kOverflow, "required sample size not representable");
  }
  return static_cast<std::uint64_t>(m);
}

/// Sample size for a memory budget of `memory_frac` of the dataset, counted
/// in value-code slots: d * m' <= memory_frac * d * m.
inline std::uint64_t sample_size_for_memory(double memory_frac, Count m) {
  if (!(memory_frac > 0.0)) throw Error(ErrorCode::kInvalidParams, "memory fraction must be > 0");
  return static_cast<std::uint64_t>(std::floor(memory_frac * static_cast<double>(m)));
}

class SampleModel {
 public:
  SampleModel(std::vector<Item> samples, std::uint64_t m_prime, HHParams params)
      : samples_(std::move(samples)), m_prime_(m_prime), params_(params) {}

  /// f^_T(v): fraction of the sample whose projection on `t` equals `v`.
  /// The denominator is the number of items actually held, which is m'
  /// whenever the stream had at least m' items.
  double frequency(const Subcube& t, const JointValue& v) const {
    if (v.size() != t.size()) throw Error(ErrorCode::kDimensionMismatch, "value arity differs from subcube");
    if (samples_.empty()) return 0.0;
    Count hits = 0;
    for (const Item& z : samples_) {
      bool match = true;
      for (std::size_t j = 0; j < t.size() && match; ++j) match = z.values[t[j]] == v[j];
      hits += match;
    }
    return static_cast<double>(hits) / static_cast<double>(samples_.size());
  }

  Verdict query(const Subcube& t, const JointValue& v) const {
    return query(t, v, params_.gamma_star());
  }

  Verdict query(const Subcube& t, const JointValue& v, double threshold) const {
    if (samples_.empty()) return Verdict::kNo;
    return frequency(t, v) >= threshold ? Verdict::kYes : Verdict::kNo;
  }

  std::vector<HeavyHitter> all_query(const Subcube& t) const {
    return all_query(t, params_.gamma_star());
  }

  /// Groups sample projections by hash; O(|S|) per call.
  std::vector<HeavyHitter> all_query(const Subcube& t, double threshold) const {
    std::vector<HeavyHitter> out;
    if (samples_.empty()) return out;
    const double n = static_cast<double>(samples_.size());
    for (const auto& [v, c] : group(t)) {
      double f = static_cast<double>(c) / n;
      if (f >= threshold) out.push_back({v, f});
    }
    sort_by_value(out);
    return out;
  }

  /// Sample counts of every projected value.
  std::unordered_map<JointValue, Count, JointValueHash> group(const Subcube& t) const {
    std::unordered_map<JointValue, Count, JointValueHash> counts;
    for (const Item& z : samples_) ++counts[project(z, t)];
    return counts;
  }

  const std::vector<Item>& samples() const noexcept { return samples_; }
  std::uint64_t m_prime() const noexcept { return m_prime_; }
  const HHParams& params() const noexcept { return params_; }

  /// d value-code slots per sample slot.
  std::uint64_t memory_slots(std::size_t d) const { return m_prime_ * d; }

 private:
  std::vector<Item> samples_;
  std::uint64_t m_prime_;
  HHParams params_;
};

inline SampleModel build_sample(const Dataset& ds, std::uint64_t m_prime, std::uint64_t seed,
                                HHParams params) {
  Reservoir<Item> reservoir(m_prime, seed);
  ds.replay([&](const Item& item) { reservoir.update(item); });
  return SampleModel(std::move(reservoir).release(), m_prime, params);
}

}  // namespace shh
