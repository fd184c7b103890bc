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

#include "trajcover/losses.h"

#include <cmath>
#include <numeric>

#include "gtest/gtest.h"
#include "test_util.h"
#include "trajcover/contract.h"

namespace trajcover {
namespace {

using testing::NumericGradient;
using testing::RandomVector;
using testing::RelativeError;

OnRoadMask RandomMask(Rng& rng, std::size_t n) {
  OnRoadMask m(n);
  for (auto& v : m) v = rng.Bernoulli(0.5) ? 1 : 0;
  return m;
}

std::vector<double> RandomTarget(Rng& rng, std::size_t n) {
  std::vector<double> w = RandomVector(rng, n, 0.0, 1.0);
  const double s = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v /= s;
  return w;
}

TEST(SoftmaxTest, Examples) {
  for (double p : Softmax(std::vector<double>{3, 3, 3, 3})) EXPECT_DOUBLE_EQ(p, 0.25);
  const auto p = Softmax(std::vector<double>{0.0, std::log(3.0)});
  EXPECT_NEAR(p[0], 0.25, 1e-15);
  EXPECT_NEAR(p[1], 0.75, 1e-15);
  const auto big = Softmax(std::vector<double>{1000, 1000});
  EXPECT_DOUBLE_EQ(big[0], 0.5);
}

TEST(SoftmaxTest, ShiftInvariance) {
  Rng rng(1);
  for (int t = 0; t < 50; ++t) {
    auto x = RandomVector(rng, 7, -5, 5);
    const auto p = Softmax(x);
    for (double& v : x) v += 123.4;
    const auto q = Softmax(x);
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(p[i], q[i], 1e-13);
  }
}

TEST(CrossEntropyTest, UniformLogitsGiveLogK) {
  const auto r = CrossEntropy(std::vector<double>(4, 0.0), OneHot(4, 2));
  EXPECT_NEAR(r.loss, std::log(4.0), 1e-12);
}

TEST(CrossEntropyTest, StationaryAtSoftmaxTarget) {
  const std::vector<double> x = {0.3, -1.2, 2.0};
  const auto r = CrossEntropy(x, Softmax(x));
  for (double g : r.grad) EXPECT_NEAR(g, 0.0, 1e-15);
}

TEST(CrossEntropyTest, NonNegativeAndZeroWhenSaturated) {
  Rng rng(2);
  for (int t = 0; t < 100; ++t) {
    EXPECT_GE(CrossEntropy(RandomVector(rng, 6), RandomTarget(rng, 6)).loss, 0.0);
  }
  std::vector<double> x(5, -20.0);
  x[3] = 20.0;
  EXPECT_LE(CrossEntropy(x, OneHot(5, 3)).loss, 1e-7);
}

TEST(CrossEntropyTest, RejectsUnnormalizedTarget) {
  EXPECT_THROW(CrossEntropy(std::vector<double>{0, 0}, std::vector<double>{0.5, 0.6}),
               ContractViolation);
  EXPECT_THROW(CrossEntropy(std::vector<double>{0, 0}, std::vector<double>{1.5, -0.5}),
               ContractViolation);
  EXPECT_THROW(CrossEntropy(std::vector<double>{0, 0}, std::vector<double>{1.0}),
               ContractViolation);
}

TEST(CrossEntropyTest, GradientMatchesFiniteDifferences) {
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng.Below(20);
    const auto x = RandomVector(rng, n, -3, 3);
    const auto w = RandomTarget(rng, n);
    const auto num = NumericGradient([&](const auto& v) { return CrossEntropy(v, w).loss; }, x);
    EXPECT_LE(RelativeError(CrossEntropy(x, w).grad, num), 1e-6);
  }
}

TEST(WceTargetTest, InverseDistanceExample) {
  const auto r = WceTarget(std::vector<double>{1, 3, 9}, 4.0);
  EXPECT_FALSE(r.fallback);
  EXPECT_NEAR(r.weights[0], 0.75, 1e-12);
  EXPECT_NEAR(r.weights[1], 0.25, 1e-12);
  EXPECT_NEAR(r.weights[2], 0.0, 1e-12);
}

TEST(WceTargetTest, LargeThresholdKeepsEveryMode) {
  const auto r = WceTarget(std::vector<double>{1, 30, 900}, 1000.0);
  for (double w : r.weights) EXPECT_GT(w, 0.0);
  EXPECT_NEAR(std::accumulate(r.weights.begin(), r.weights.end(), 0.0), 1.0, 1e-12);
}

TEST(WceTargetTest, ZeroDistanceTakesAlmostAllMass) {
  const auto r = WceTarget(std::vector<double>{2.0, 0.0, 1.0}, 3.0);
  EXPECT_GE(r.weights[1], 0.999);
}

TEST(WceTargetTest, ThresholdJustAboveMinimumIsOneHot) {
  const std::vector<double> d = {4.0, 2.5, 2.5 + 1e-3, 7.0};
  const auto r = WceTarget(d, 2.5 + 1e-9);
  EXPECT_EQ(r.weights, OneHot(4, 1));
}

TEST(WceTargetTest, FallsBackToOneHotWhenNothingIsClose) {
  const auto r = WceTarget(std::vector<double>{5, 3, 9}, 1.0);
  EXPECT_TRUE(r.fallback);
  EXPECT_EQ(r.weights, OneHot(3, 1));
}

TEST(AvoidNearbyTest, Examples) {
  const auto w = AvoidNearbyTarget(std::vector<double>{0.5, 1.0, 1.5, 4, 9});
  const std::vector<double> expected = {1 / 1.4, 0, 0, 0.2 / 1.4, 0.2 / 1.4};
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(w[i], expected[i], 1e-12);
  EXPECT_NEAR(w[0], 0.714, 1e-3);
  EXPECT_NEAR(w[3], 0.143, 1e-3);

  EXPECT_EQ(AvoidNearbyTarget(std::vector<double>{1.5, 0.2, 1.0, 2.0}), OneHot(4, 1));

  // Only the closest is near: raw [1, 1/4, 1/4, 1/4].
  const auto far = AvoidNearbyTarget(std::vector<double>{0.1, 5, 6, 7});
  EXPECT_NEAR(far[0], 1.0 / 1.75, 1e-12);
  EXPECT_NEAR(far[1], 0.25 / 1.75, 1e-12);
}

TEST(AvoidNearbyTest, TiesGoToLowestIndex) {
  // Index 1 is the match; its tied twin is excluded; index 0 is far.
  const auto t = AvoidNearbyTarget(std::vector<double>{3.0, 1.0, 1.0});
  EXPECT_DOUBLE_EQ(t[0], 0.25);
  EXPECT_DOUBLE_EQ(t[1], 0.75);
  EXPECT_EQ(t[2], 0.0);
}

TEST(OffroadLossTest, ZeroLogitsGiveKLn2) {
  Rng rng(4);
  for (std::size_t k : {1u, 5u, 64u}) {
    EXPECT_NEAR(OffroadLoss(std::vector<double>(k, 0.0), RandomMask(rng, k)).loss,
                k * std::log(2.0), 1e-9);
  }
}

TEST(OffroadLossTest, SaturatedCorrectLogitsVanish) {
  const OnRoadMask m = {1, 0, 1, 0};
  EXPECT_LE(OffroadLoss(std::vector<double>{20, -20, 20, -20}, m).loss, 1e-7);
}

TEST(OffroadLossTest, ExtremeLogitsStayFinite) {
  const auto r = OffroadLoss(std::vector<double>{-1000, 1000}, OnRoadMask{1, 0});
  EXPECT_NEAR(r.loss, 2 * -std::log(1e-12), 1e-6);
}

TEST(OffroadLossTest, RejectsNonBinaryMask) {
  EXPECT_THROW(OffroadLoss(std::vector<double>{0, 0}, OnRoadMask{1, 2}), ContractViolation);
  EXPECT_THROW(OffroadLoss(std::vector<double>{0, 0}, OnRoadMask{1}), ContractViolation);
}

TEST(OffroadLossTest, GradientMatchesFiniteDifferences) {
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng.Below(20);
    const auto x = RandomVector(rng, n, -4, 4);
    const auto m = RandomMask(rng, n);
    const auto num = NumericGradient([&](const auto& v) { return OffroadLoss(v, m).loss; }, x);
    EXPECT_LE(RelativeError(OffroadLoss(x, m).grad, num), 1e-6);
  }
}

TEST(TotalLossTest, AdditivityAndLinearity) {
  Rng rng(6);
  for (int t = 0; t < 50; ++t) {
    const auto x = RandomVector(rng, 9);
    const auto w = RandomTarget(rng, 9);
    const auto m = RandomMask(rng, 9);
    const double ce = CrossEntropy(x, w).loss;
    const double om = OffroadLoss(x, m).loss;
    const auto l0 = TotalLoss(x, w, m, 0.0);
    EXPECT_EQ(l0.loss, ce);
    EXPECT_EQ(l0.grad, CrossEntropy(x, w).grad);
    EXPECT_NEAR(TotalLoss(x, w, m, 1.0).loss, ce + om, 1e-12);
    EXPECT_NEAR(TotalLoss(x, w, m, 10.0).loss - l0.loss, 10.0 * om, 1e-12);
    EXPECT_EQ(TotalLoss(x, w, m, 3.0).offroad_term, om);
  }
  EXPECT_THROW(TotalLoss(std::vector<double>{0}, OneHot(1, 0), OnRoadMask{1}, -1.0),
               ContractViolation);
}

TEST(TotalLossTest, OffroadTermIgnoresTheClassificationTarget) {
  const std::vector<double> x = {0.5, -1, 2};
  const OnRoadMask m = {1, 0, 1};
  EXPECT_EQ(TotalLoss(x, OneHot(3, 0), m, 2.0).offroad_term,
            TotalLoss(x, OneHot(3, 2), m, 2.0).offroad_term);
}

TEST(TotalLossTest, GradientMatchesFiniteDifferences) {
  Rng rng(7);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng.Below(15);
    const auto x = RandomVector(rng, n, -3, 3);
    const auto w = RandomTarget(rng, n);
    const auto m = RandomMask(rng, n);
    const double lambda = rng.Uniform(0, 10);
    const auto num =
        NumericGradient([&](const auto& v) { return TotalLoss(v, w, m, lambda).loss; }, x);
    EXPECT_LE(RelativeError(TotalLoss(x, w, m, lambda).grad, num), 1e-6);
  }
}

TEST(SmoothL1Test, Examples) {
  EXPECT_DOUBLE_EQ(SmoothL1(0.0), 0.0);
  EXPECT_DOUBLE_EQ(SmoothL1(0.5), 0.125);
  EXPECT_DOUBLE_EQ(SmoothL1(2.0), 1.5);
  EXPECT_DOUBLE_EQ(SmoothL1(-2.0), 1.5);
  EXPECT_DOUBLE_EQ(SmoothL1(1.0, 2.0), 0.25);
  EXPECT_DOUBLE_EQ(SmoothL1Derivative(0.5), 0.5);
  EXPECT_DOUBLE_EQ(SmoothL1Derivative(-3.0), -1.0);
}

struct OrdinalFixture {
  TrajectorySet anchors;
  Trajectory gt;
};

OrdinalFixture MakeOrdinal(Rng& rng, std::size_t k, std::size_t n) {
  std::vector<Trajectory> members;
  for (std::size_t i = 0; i < k; ++i) members.push_back(testing::RandomTraj(rng, n, 5.0));
  return {TrajectorySet(members, 1.0, DistanceMetric::kMaxL2, k), testing::RandomTraj(rng, n, 5.0)};
}

TEST(OrdinalRegressionTest, ExactResidualsGiveZeroRegressionTerm) {
  Rng rng(8);
  const auto f = MakeOrdinal(rng, 4, 3);
  const std::size_t km = ClosestMatch(f.anchors, f.gt);
  std::vector<double> res(4 * 3 * 2, 0.0);
  for (std::size_t i = 0; i < 3; ++i) {
    res[(km * 3 + i) * 2] = f.gt.points[i].x - f.anchors[km].points[i].x;
    res[(km * 3 + i) * 2 + 1] = f.gt.points[i].y - f.anchors[km].points[i].y;
  }
  const auto r = OrdinalRegressionLoss(std::vector<double>(4, 0.0), res, f.anchors, f.gt);
  EXPECT_EQ(r.matched, km);
  EXPECT_NEAR(r.regression_term, 0.0, 1e-15);
  EXPECT_NEAR(r.loss, std::log(4.0), 1e-12);
}

TEST(OrdinalRegressionTest, GroundTruthOnAnchorWithZeroResidualsIsCeOnly) {
  Rng rng(9);
  const auto f = MakeOrdinal(rng, 5, 4);
  const auto logits = RandomVector(rng, 5);
  const auto r = OrdinalRegressionLoss(logits, std::vector<double>(5 * 4 * 2, 0.0),
                                       f.anchors, f.anchors[3]);
  EXPECT_EQ(r.matched, 3u);
  EXPECT_EQ(r.regression_term, 0.0);
  EXPECT_DOUBLE_EQ(r.loss, CrossEntropy(logits, OneHot(5, 3)).loss);
}

TEST(OrdinalRegressionTest, RegressionTermIgnoresLogits) {
  Rng rng(10);
  const auto f = MakeOrdinal(rng, 6, 5);
  const auto res = RandomVector(rng, 6 * 5 * 2);
  EXPECT_EQ(OrdinalRegressionLoss(RandomVector(rng, 6), res, f.anchors, f.gt).regression_term,
            OrdinalRegressionLoss(RandomVector(rng, 6), res, f.anchors, f.gt).regression_term);
}

TEST(OrdinalRegressionTest, GradientsMatchFiniteDifferencesAndVanishOffMatch) {
  Rng rng(11);
  for (int t = 0; t < 100; ++t) {
    const std::size_t k = 2 + rng.Below(6);
    const std::size_t n = 1 + rng.Below(6);
    const auto f = MakeOrdinal(rng, k, n);
    const auto logits = RandomVector(rng, k);
    const auto res = RandomVector(rng, k * n * 2, -3, 3);
    const auto r = OrdinalRegressionLoss(logits, res, f.anchors, f.gt);
    const auto num_logits = NumericGradient(
        [&](const auto& v) { return OrdinalRegressionLoss(v, res, f.anchors, f.gt).loss; },
        logits);
    const auto num_res = NumericGradient(
        [&](const auto& v) { return OrdinalRegressionLoss(logits, v, f.anchors, f.gt).loss; },
        res);
    EXPECT_LE(RelativeError(r.grad_logits, num_logits), 1e-6);
    EXPECT_LE(RelativeError(r.grad_residuals, num_res), 1e-6);
    for (std::size_t m = 0; m < k; ++m) {
      if (m == r.matched) continue;
      for (std::size_t i = 0; i < 2 * n; ++i) EXPECT_EQ(r.grad_residuals[m * 2 * n + i], 0.0);
    }
  }
}

TEST(OrdinalRegressionTest, ShapeMismatchIsContractViolation) {
  Rng rng(12);
  const auto f = MakeOrdinal(rng, 3, 2);
  EXPECT_THROW(OrdinalRegressionLoss(std::vector<double>(3, 0.0), std::vector<double>(5, 0.0),
                                     f.anchors, f.gt),
               ContractViolation);
  EXPECT_THROW(OrdinalRegressionLoss(std::vector<double>(2, 0.0), std::vector<double>(12, 0.0),
                                     f.anchors, f.gt),
               ContractViolation);
}

}  // namespace
}  // namespace trajcover
