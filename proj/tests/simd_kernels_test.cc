// Copyright 2026 The TrajCover Authors
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

#include "trajcover/simd/kernels.h"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "test_util.h"

namespace trajcover::simd {
namespace {

using testing::RandomVector;

// Sizes around the vector widths, to exercise every tail path.
constexpr std::size_t kSizes[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 64, 101};

double Tolerance(double magnitude) { return 1e-12 * std::max(1.0, magnitude); }

TEST(ScalarKernelTest, PointwiseDistanceHandValues) {
  const double a[] = {0, 0, 3, 4};
  const double b[] = {0, 0, 0, 0};
  const DistanceSummary s = ScalarKernels().pointwise_distance(a, b, 2);
  EXPECT_DOUBLE_EQ(s.sum, 5.0);
  EXPECT_DOUBLE_EQ(s.max, 5.0);
}

TEST(ScalarKernelTest, GemvHandValues) {
  const double w[] = {1, 2, 3, 4, 5, 6};
  const double x[] = {1, 0, -1};
  const double bias[] = {10, 20};
  double y[2];
  ScalarKernels().gemv(w, x, bias, y, 2, 3);
  EXPECT_DOUBLE_EQ(y[0], 10 + 1 - 3);
  EXPECT_DOUBLE_EQ(y[1], 20 + 4 - 6);
  ScalarKernels().gemv(w, x, nullptr, y, 2, 3);
  EXPECT_DOUBLE_EQ(y[0], -2.0);
}

class Avx2EquivalenceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    avx2_ = Avx2Kernels();
    if (avx2_ == nullptr) GTEST_SKIP() << "AVX2/FMA kernels unavailable on this host";
  }
  const KernelTable* avx2_ = nullptr;
  const KernelTable& scalar_ = ScalarKernels();
};

TEST_F(Avx2EquivalenceTest, PointwiseDistance) {
  Rng rng(1);
  for (std::size_t n : kSizes) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto a = RandomVector(rng, 2 * n, -50, 50);
      const auto b = RandomVector(rng, 2 * n, -50, 50);
      const DistanceSummary s = scalar_.pointwise_distance(a.data(), b.data(), n);
      const DistanceSummary v = avx2_->pointwise_distance(a.data(), b.data(), n);
      EXPECT_NEAR(v.sum, s.sum, Tolerance(s.sum)) << "n=" << n;
      EXPECT_EQ(v.max, s.max) << "n=" << n;
    }
  }
}

TEST_F(Avx2EquivalenceTest, Gemv) {
  Rng rng(2);
  for (std::size_t rows : {1, 3, 8, 13}) {
    for (std::size_t cols : kSizes) {
      const auto w = RandomVector(rng, rows * cols);
      const auto x = RandomVector(rng, cols);
      const auto bias = RandomVector(rng, rows);
      std::vector<double> ys(rows), yv(rows);
      scalar_.gemv(w.data(), x.data(), bias.data(), ys.data(), rows, cols);
      avx2_->gemv(w.data(), x.data(), bias.data(), yv.data(), rows, cols);
      for (std::size_t r = 0; r < rows; ++r) {
        EXPECT_NEAR(yv[r], ys[r], Tolerance(4.0 * cols)) << rows << "x" << cols;
      }
    }
  }
}

TEST_F(Avx2EquivalenceTest, GemvTransposedAccumulate) {
  Rng rng(3);
  for (std::size_t rows : {1, 3, 8, 13}) {
    for (std::size_t cols : kSizes) {
      const auto w = RandomVector(rng, rows * cols);
      const auto dy = RandomVector(rng, rows);
      auto ds = RandomVector(rng, cols);
      auto dv = ds;
      scalar_.gemv_transposed_acc(w.data(), dy.data(), ds.data(), rows, cols);
      avx2_->gemv_transposed_acc(w.data(), dy.data(), dv.data(), rows, cols);
      for (std::size_t c = 0; c < cols; ++c) {
        EXPECT_NEAR(dv[c], ds[c], Tolerance(4.0 * rows));
      }
    }
  }
}

TEST_F(Avx2EquivalenceTest, Rank1UpdateAndAxpy) {
  Rng rng(4);
  for (std::size_t rows : {1, 3, 8}) {
    for (std::size_t cols : kSizes) {
      const auto dy = RandomVector(rng, rows);
      const auto x = RandomVector(rng, cols);
      auto ws = RandomVector(rng, rows * cols);
      auto wv = ws;
      scalar_.rank1_update(ws.data(), dy.data(), x.data(), -0.37, rows, cols);
      avx2_->rank1_update(wv.data(), dy.data(), x.data(), -0.37, rows, cols);
      for (std::size_t i = 0; i < ws.size(); ++i) EXPECT_NEAR(wv[i], ws[i], 1e-12);

      auto ys = RandomVector(rng, cols);
      auto yv = ys;
      scalar_.axpy(1.75, x.data(), ys.data(), cols);
      avx2_->axpy(1.75, x.data(), yv.data(), cols);
      for (std::size_t i = 0; i < cols; ++i) EXPECT_NEAR(yv[i], ys[i], 1e-12);
    }
  }
}

TEST(DispatchTest, ActiveTableIsOneOfTheVariants) {
  const KernelTable& active = ActiveKernels();
  const KernelTable* avx2 = Avx2Kernels();
  EXPECT_TRUE(&active == &ScalarKernels() || (avx2 != nullptr && &active == avx2));
  EXPECT_FALSE(active.name.empty());
}

}  // namespace
}  // namespace trajcover::simd
