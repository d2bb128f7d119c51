// Copyright 2026 The csgd-lab Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// =============================================================================

#include <gtest/gtest.h>

#include "csgd/compression.h"
#include "csgd/rng.h"

namespace csgd {
namespace {

DenseVector Vec(std::initializer_list<double> v) {
  DenseVector out(static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

TEST(TopK, KeepsLargestMagnitudes) {
  EXPECT_EQ(TopK(Vec({3, -5, 1, 0.5}), CompressionSpec(2, 4)),
            Vec({3, -5, 0, 0}));
}

TEST(TopK, FullKIsIdentity) {
  const DenseVector v = Vec({0.1, -2, 3e-300, 7});
  EXPECT_EQ(TopK(v, CompressionSpec(4, 4)), v);
}

TEST(TopK, TiesGoToLowestIndex) {
  EXPECT_EQ(TopK(Vec({1, -1, 1}), CompressionSpec(2, 3)), Vec({1, -1, 0}));
  const auto idx = TopKIndices(Vec({2, 5, 5, 5, 1}), CompressionSpec(2, 5));
  EXPECT_EQ(idx, (std::vector<int>{1, 2}));
}

TEST(TopK, IndicesSorted) {
  const auto idx = TopKIndices(Vec({1, 9, 2, 8, 3, 7}), CompressionSpec(3, 6));
  EXPECT_EQ(idx, (std::vector<int>{1, 3, 5}));
}

TEST(CompressionSpec, Validation) {
  EXPECT_THROW(CompressionSpec(0, 4).Validate(), Error);
  EXPECT_THROW(CompressionSpec(5, 4).Validate(), Error);
  EXPECT_DOUBLE_EQ(CompressionSpec(1, 4).gamma(), 0.25);
  EXPECT_THROW(TopK(Vec({1, 2}), CompressionSpec(1, 3)), Error);
}

TEST(Feedback, DefinitionArithmetic) {
  const auto r = CompressWithFeedback(Vec({0, 0}), Vec({2, 1}),
                                      CompressionSpec(1, 2));
  EXPECT_EQ(r.g, Vec({2, 0}));
  EXPECT_EQ(r.mem, Vec({0, 1}));
  EXPECT_EQ(r.support, (std::vector<int>{0}));
}

TEST(Feedback, LosslessCase) {
  const auto r = CompressWithFeedback(Vec({0.5, -1}), Vec({2, 1}),
                                      CompressionSpec(2, 2));
  EXPECT_EQ(r.g, Vec({2.5, 0}));
  EXPECT_EQ(r.mem, Vec({0, 0}));
}

TEST(Feedback, MemoryPersists) {
  const auto r = CompressWithFeedback(Vec({0, 1}), Vec({2, 0}),
                                      CompressionSpec(1, 2));
  EXPECT_EQ(r.g, Vec({2, 0}));
  EXPECT_EQ(r.mem, Vec({0, 1}));
}

TEST(Feedback, SplitIsExact) {
  Rng rng(8);
  DenseVector m(50), u(50);
  for (int i = 0; i < 50; ++i) {
    m[i] = rng.Normal();
    u[i] = rng.Normal() * 1e-7;
  }
  const auto r = CompressWithFeedback(m, u, CompressionSpec(5, 50));
  const DenseVector s = m + u;
  EXPECT_EQ(r.g + r.mem, s);
}

TEST(Contraction, Cases) {
  EXPECT_TRUE(ContractionCheck(Vec({1, 2, 3}), CompressionSpec(3, 3)));
  // equality case: residual 3 against 3/4 * 4
  EXPECT_TRUE(ContractionCheck(Vec({1, 1, 1, 1}), CompressionSpec(1, 4)));
  Rng rng(13);
  DenseVector v(128);
  for (int s = 0; s < 1000; ++s) {
    for (int j = 0; j < 128; ++j) v[j] = rng.Normal();
    ASSERT_TRUE(ContractionCheck(v, CompressionSpec(13, 128)));
  }
}

}  // namespace
}  // namespace csgd
