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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "shh/core.hpp"

namespace shh {
namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kInvalidArgument;
}

TEST(Subcube, WellFormed) {
  Subcube t = make_subcube({0, 2, 4}, 6);
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t[0], 0u);
  EXPECT_EQ(t[1], 2u);
  EXPECT_EQ(t[2], 4u);
  EXPECT_EQ(t.max_coord(), 4u);
  EXPECT_EQ(t.to_string_1based(), "1,3,5");
}

TEST(Subcube, Rejects) {
  EXPECT_EQ(code_of([] { make_subcube({1, 1}, 3); }), ErrorCode::kDuplicateIndex);
  EXPECT_EQ(code_of([] { make_subcube({5}, 5); }), ErrorCode::kIndexOutOfRange);
  EXPECT_EQ(code_of([] { make_subcube(std::vector<std::size_t>{}, 5); }), ErrorCode::kEmpty);
}

TEST(Subcube, KeepsGivenOrder) {
  Subcube t = make_subcube({3, 1}, 4);
  EXPECT_EQ(t[0], 3u);
  EXPECT_EQ(t[1], 1u);
}

TEST(Project, Examples) {
  EXPECT_EQ(project(Item{7, 3, 9}, make_subcube({0, 2}, 3)), (JointValue{7, 9}));
  EXPECT_EQ(project(Item{4}, make_subcube({0}, 1)), (JointValue{4}));
  EXPECT_EQ(project(Item{1, 2}, make_subcube({1, 0}, 2)), (JointValue{2, 1}));
}

TEST(Project, ShortItemIsDimensionMismatch) {
  EXPECT_EQ(code_of([] { project(Item{1, 2}, make_subcube({0, 3}, 4)); }), ErrorCode::kDimensionMismatch);
}

TEST(Project, PermutationAndNesting) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<Code> val(0, 99);
  for (int trial = 0; trial < 200; ++trial) {
    Item item;
    for (int i = 0; i < 6; ++i) item.values.push_back(val(rng));
    std::vector<std::size_t> coords = {0, 1, 2, 3, 4, 5};
    std::shuffle(coords.begin(), coords.end(), rng);
    coords.resize(1 + trial % 6);
    JointValue full = project(item, make_subcube(coords, 6));

    auto perm = coords;
    std::shuffle(perm.begin(), perm.end(), rng);
    JointValue permuted = project(item, make_subcube(perm, 6));
    for (std::size_t j = 0; j < perm.size(); ++j) {
      auto pos = std::find(coords.begin(), coords.end(), perm[j]) - coords.begin();
      EXPECT_EQ(permuted[j], full[pos]);
    }

    std::vector<std::size_t> sub(coords.begin(), coords.begin() + (coords.size() + 1) / 2);
    JointValue nested = project(item, make_subcube(sub, 6));
    for (std::size_t j = 0; j < sub.size(); ++j) EXPECT_EQ(nested[j], full[j]);
  }
}

TEST(HHParams, Defaults) {
  HHParams p(0.1);
  EXPECT_EQ(p.gamma(), 0.1);
  EXPECT_EQ(p.lambda(), 0.05);
  EXPECT_EQ(p.gamma_star(), 0.05);
  EXPECT_DOUBLE_EQ(p.alpha_budget(), 0.01);
  EXPECT_EQ(p.retention_threshold(), 0.05);
}

TEST(HHParams, Validation) {
  EXPECT_EQ(code_of([] { HHParams(0.0); }), ErrorCode::kInvalidParams);
  EXPECT_EQ(code_of([] { HHParams(1.5); }), ErrorCode::kInvalidParams);
  EXPECT_EQ(code_of([] { HHParams(0.1, 0.025); }), ErrorCode::kInvalidParams);
  EXPECT_EQ(code_of([] { HHParams(0.1, 0.2); }), ErrorCode::kInvalidParams);
  EXPECT_EQ(code_of([] { HHParams(0.1, 0.05, 0.02); }), ErrorCode::kInvalidParams);
  EXPECT_NO_THROW(HHParams(0.1, 0.1, 0.005));
  EXPECT_NO_THROW(HHParams(1.0));
}

TEST(HHParams, SweepWidensGammaStar) {
  HHParams p = HHParams::for_sweep(0.1, 0.025);
  EXPECT_EQ(p.gamma_star(), 0.025);
  EXPECT_EQ(p.retention_threshold(), 0.025);
  EXPECT_EQ(HHParams::for_sweep(0.1, 0.2).retention_threshold(), 0.05);
}

TEST(Verdict, Names) {
  EXPECT_STREQ(to_string(Verdict::kYes), "YES");
  EXPECT_STREQ(to_string(Verdict::kNo), "NO");
}

}  // namespace
}  // namespace shh
