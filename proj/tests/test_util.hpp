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

// Shared fixtures for the test suite. Everything here counts by brute force
// and never calls into the library's own counting code.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "shh/core.hpp"

namespace shh::testing {

/// The eight-row, two-coordinate toy dataset used throughout.
inline std::vector<Item> d0_items() {
  return {{1, 1}, {1, 1}, {1, 2}, {2, 1}, {2, 2}, {1, 1}, {2, 1}, {1, 2}};
}

/// Random categorical rows. Each coordinate draws from its own random
/// weight vector; `heavy` raises the weights to a power so a few values
/// dominate.
inline std::vector<Item> random_items(std::mt19937_64& rng, std::size_t d, std::size_t n_max, std::size_t m,
                                      double heavy = 2.0) {
  std::vector<std::discrete_distribution<int>> dists;
  std::uniform_int_distribution<std::size_t> card(1, n_max);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<double> w(card(rng));
    for (double& x : w) x = std::pow(unit(rng), heavy);
    w[0] += 1e-9;
    dists.emplace_back(w.begin(), w.end());
  }
  std::vector<Item> items(m);
  for (auto& it : items) {
    it.values.resize(d);
    for (std::size_t j = 0; j < d; ++j) it.values[j] = static_cast<Code>(dists[j](rng));
  }
  return items;
}

/// Brute-force per-coordinate counts.
inline std::vector<std::map<Code, Count>> marginal_counts(const std::vector<Item>& items) {
  std::vector<std::map<Code, Count>> out(items.front().size());
  for (const auto& it : items) {
    for (std::size_t j = 0; j < it.size(); ++j) ++out[j][it.values[j]];
  }
  return out;
}

/// Brute-force joint counts on the given coordinates.
inline std::map<std::vector<Code>, Count> joint_counts(const std::vector<Item>& items,
                                                       const std::vector<std::size_t>& coords) {
  std::map<std::vector<Code>, Count> out;
  for (const auto& it : items) {
    std::vector<Code> v;
    for (std::size_t c : coords) v.push_back(it.values[c]);
    ++out[v];
  }
  return out;
}

/// Cartesian product of per-position value lists.
inline std::vector<std::vector<Code>> cartesian(const std::vector<std::vector<Code>>& lists) {
  std::vector<std::vector<Code>> out = {{}};
  for (const auto& l : lists) {
    std::vector<std::vector<Code>> next;
    for (const auto& prefix : out) {
      for (Code x : l) {
        auto v = prefix;
        v.push_back(x);
        next.push_back(std::move(v));
      }
    }
    out = std::move(next);
  }
  return out;
}

/// Single-coordinate streams built to stress the candidate promise: values
/// placed just above lambda/2 or just below lambda/4, hidden among many
/// singletons, front-loaded, back-loaded or interleaved. `kind` picks the
/// layout; `lambda` sets the targets.
inline std::vector<Code> adversarial_stream(std::mt19937_64& rng, int kind, double lambda, std::size_t m) {
  std::vector<Code> heavy;
  auto add = [&](Code x, double f) {
    auto n = static_cast<std::size_t>(std::ceil(f * static_cast<double>(m)));
    heavy.insert(heavy.end(), n, x);
  };
  add(0, lambda / 2.0);           // must be kept
  add(1, lambda / 4.0 * 0.999);   // must be dropped
  add(2, lambda / 2.0 + 0.01);
  add(3, lambda / 8.0);
  std::vector<Code> out = heavy;
  Code fresh = 100;
  while (out.size() < m) out.push_back(kind == 3 ? 100 + static_cast<Code>(out.size() % 7) : fresh++);
  out.resize(m);
  switch (kind % 4) {
    case 0: std::rotate(out.begin(), out.begin() + heavy.size(), out.end()); break;  // heavy at the end
    case 1: break;                                                                   // heavy first
    default: std::shuffle(out.begin(), out.end(), rng); break;
  }
  return out;
}

inline std::filesystem::path temp_dir() {
  std::filesystem::path p = SHH_TEST_TMP;
  std::filesystem::create_directories(p);
  return p;
}

inline std::filesystem::path write_file(const std::string& name, const std::string& text) {
  auto p = temp_dir() / name;
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace shh::testing
