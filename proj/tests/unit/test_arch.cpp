/* Copyright (c) 2026 The sednas Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License. */

#include <gtest/gtest.h>

#include "sednas/arch.hpp"

using namespace sednas;

TEST(EffectiveKernel, FoldsDilation) {
  EXPECT_EQ(effective_kernel({3, 3, 1, 1}), (KernelSpec{3, 3, 1, 1}));
  EXPECT_EQ(effective_kernel({3, 3, 1, 2}), (KernelSpec{5, 5, 1, 1}));
  EXPECT_EQ(effective_kernel({1, 1, 1, 4}), (KernelSpec{1, 1, 1, 1}));
  EXPECT_EQ(effective_kernel({5, 3, 2, 3}), (KernelSpec{13, 7, 2, 1}));
}

TEST(Dominates, NonStrictCeilingReading) {
  EXPECT_TRUE(dominates({3, 3, 1, 1}, {3, 3, PoolKind::max}, {1, 1, 0}));
  EXPECT_FALSE(dominates({1, 1, 1, 1}, {3, 3, PoolKind::max}, {1, 1, 0}));
  EXPECT_TRUE(dominates({3, 3, 1, 1}, {3, 3, PoolKind::max}, {3, 3, 0}));
  // ceil(3 / 2) = 2
  EXPECT_TRUE(dominates({2, 2, 1, 1}, {3, 3, PoolKind::avg}, {2, 2, 0}));
  EXPECT_FALSE(dominates({1, 3, 1, 1}, {3, 3, PoolKind::avg}, {2, 2, 0}));
  // both axes must hold
  EXPECT_FALSE(dominates({5, 1, 1, 1}, {3, 3, PoolKind::max}, {1, 1, 0}));
}

TEST(OpKind, DilatedConvolutionsShareIdentity) {
  EXPECT_EQ(OpKind::conv({3, 3, 1, 2}), OpKind::conv({5, 5, 1, 1}));
  EXPECT_NE(OpKind::conv({3, 3, 1, 1}), OpKind::conv({5, 5, 1, 1}));
  EXPECT_EQ(describe(OpKind::conv({3, 3, 1, 1})), "conv3x3");
  EXPECT_EQ(describe(OpKind::skip()), "skip");
}

TEST(SearchSpace, TssInventory) {
  const SearchSpaceDescriptor s = tss_space();
  EXPECT_EQ(s.id(), "nats-tss");
  EXPECT_EQ(s.opt().size(), 5u);
  ASSERT_EQ(s.kernels().size(), 2u);
  EXPECT_EQ(s.kernels()[0], (KernelSpec{3, 3, 1, 1}));
  EXPECT_EQ(s.kernels()[1], (KernelSpec{1, 1, 1, 1}));
  ASSERT_EQ(s.pools().size(), 1u);
  EXPECT_TRUE(s.has_skip());
  EXPECT_TRUE(s.has_pool());
  EXPECT_EQ(s.block_count(), 15);
  const auto stages = s.expanded_skeleton();
  EXPECT_EQ(stages[0].c_out, 16);
  EXPECT_EQ(stages[5].c_out, 32);
  EXPECT_EQ(stages[14].c_out, 64);
  EXPECT_EQ(stages[14].f_in, 64);
}

TEST(SearchSpace, OrderingByFeaturesThenWidth) {
  const SearchSpaceDescriptor s = SearchSpaceDescriptor::make(
      "order",
      {{"a", OpKind::conv({1, 3, 1, 1})},
       {"b", OpKind::conv({3, 1, 1, 1})},
       {"c", OpKind::conv({5, 5, 1, 1})},
       {"p", OpKind::pool_op({2, 2, PoolKind::max})},
       {"q", OpKind::pool_op({3, 3, PoolKind::avg})}},
      {{1, CellType::normal, 1, 1, 1, 1, {}}}, {}, EncodingFormat::generic_json);
  ASSERT_EQ(s.kernels().size(), 3u);
  EXPECT_EQ(s.kernels()[0].k_w, 5);
  EXPECT_EQ(s.kernels()[1].k_w, 3);
  EXPECT_EQ(s.kernels()[2].k_w, 1);
  EXPECT_EQ(s.pools()[0].o_w, 3);
  EXPECT_FALSE(s.has_skip());
}

TEST(SearchSpace, DartsSkeleton) {
  const SearchSpaceDescriptor s = darts_space();
  EXPECT_EQ(s.block_count(), 20);
  const auto stages = s.expanded_skeleton();
  int reduce = 0;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    if (stages[i].cell == CellType::reduce) {
      ++reduce;
      EXPECT_TRUE(i == 6 || i == 13) << i;
      EXPECT_EQ(stages[i].pool_stride.s_1, 2);
      EXPECT_EQ(stages[i].f_out * 4, stages[i].f_in);
    }
  }
  EXPECT_EQ(reduce, 2);
  EXPECT_EQ(stages[0].c_in, 108);
  EXPECT_EQ(stages[0].c_out, 144);
  EXPECT_EQ(darts_space(8, 16).block_count(), 8);
  // dilated 3x3 folds onto the 5x5 kind
  EXPECT_EQ(s.kernels().size(), 3u);
  EXPECT_FALSE(s.find_op("none")->sampleable);
}

TEST(Validate, ReportsStructuredViolations) {
  const SearchSpaceDescriptor s = tss_space();
  Architecture empty;
  auto v = validate(empty, s);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, ViolationKind::empty_architecture);
  EXPECT_EQ(v[0].message, "empty architecture");

  Architecture a;
  Block b;
  b.op_counts[OpKind::conv({7, 7, 1, 1})] = 5;
  b.op_counts[OpKind::skip()] = -1;
  b.c_out = 0;
  a.blocks.push_back(b);
  v = validate(a, s);
  std::set<ViolationKind> kinds;
  for (const auto& x : v) kinds.insert(x.kind);
  EXPECT_TRUE(kinds.contains(ViolationKind::unknown_operation));
  EXPECT_TRUE(kinds.contains(ViolationKind::negative_count));
  EXPECT_TRUE(kinds.contains(ViolationKind::bad_geometry));
  EXPECT_TRUE(kinds.contains(ViolationKind::slot_count_mismatch));

  a.blocks[0] = Block{};
  a.blocks[0].op_counts[OpKind::none()] = 6;
  EXPECT_TRUE(validate(a, s).empty());
  a.space_id = "darts";
  EXPECT_EQ(validate(a, s).at(0).kind, ViolationKind::space_mismatch);
}

TEST(Validate, RequireValidThrows) {
  Architecture empty;
  EXPECT_THROW(require_valid(empty, tss_space()), ValidationError);
}
