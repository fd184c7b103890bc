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

#include "trajcover/metrics.h"

#include <algorithm>
#include <limits>
#include <vector>

#include "gtest/gtest.h"
#include "test_util.h"
#include "trajcover/contract.h"

namespace trajcover {
namespace {

using testing::NaiveMaxL2;
using testing::NaiveMeanL2;
using testing::Straight;

PredictionSet Preds(std::vector<Trajectory> trajs) {
  PredictionSet p;
  const double n = static_cast<double>(trajs.size());
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    p.entries.push_back({std::move(trajs[i]), (n - static_cast<double>(i)) / (n * n)});
  }
  return p;
}

Trajectory GStraight(double lateral) { return Straight(lateral, 5, Frame::kGlobal); }

PolygonSet Band(double half_width) {
  Polygon poly;
  poly.outer = {{-10, -half_width}, {30, -half_width}, {30, half_width}, {-10, half_width}};
  return PolygonSet{{poly}};
}

TEST(MinAdeTest, Examples) {
  const Trajectory gt = GStraight(0.0);
  EXPECT_EQ(MinAde(Preds({GStraight(3), gt, GStraight(1)}), gt, 2), 0.0);
  EXPECT_DOUBLE_EQ(MinAde(Preds({GStraight(1.0)}), gt, 1), 1.0);
  EXPECT_THROW(MinAde(PredictionSet{}, gt, 1), ContractViolation);
  EXPECT_THROW(MinAde(Preds({gt}), gt, 2), ContractViolation);
}

TEST(MinAdeTest, MatchesBruteForce) {
  Rng rng(1);
  for (int t = 0; t < 100; ++t) {
    std::vector<Trajectory> trajs;
    for (int i = 0; i < 8; ++i) trajs.push_back(testing::RandomTraj(rng, 6, 5.0, Frame::kGlobal));
    const Trajectory gt = testing::RandomTraj(rng, 6, 5.0, Frame::kGlobal);
    const PredictionSet p = Preds(trajs);
    double best = std::numeric_limits<double>::infinity();
    double prev = best;
    for (std::size_t k = 1; k <= 8; ++k) {
      best = std::min(best, NaiveMeanL2(trajs[k - 1], gt));
      const double got = MinAde(p, gt, k);
      EXPECT_NEAR(got, best, 1e-12);
      EXPECT_LE(got, prev);
      prev = got;
    }
  }
}

TEST(MissRateTest, Examples) {
  const Trajectory gt = GStraight(0.0);
  EXPECT_EQ(MissRateSingle(Preds({GStraight(1.9)}), gt, 1, 2.0), 0);
  EXPECT_EQ(MissRateSingle(Preds({GStraight(2.1)}), gt, 1, 2.0), 1);
  EXPECT_EQ(MissRateSingle(Preds({GStraight(2.0)}), gt, 1, 2.0), 0);
  EXPECT_EQ(MissRateSingle(Preds({GStraight(2.5), GStraight(0.5)}), gt, 1, 2.0), 1);
  EXPECT_EQ(MissRateSingle(Preds({GStraight(2.5), GStraight(0.5)}), gt, 2, 2.0), 0);
  EXPECT_THROW(MissRateSingle(Preds({gt}), gt, 1, 0.0), ContractViolation);
}

TEST(MissRateTest, NonIncreasingInKAndD) {
  Rng rng(2);
  for (int t = 0; t < 100; ++t) {
    std::vector<Trajectory> trajs;
    for (int i = 0; i < 6; ++i) trajs.push_back(testing::RandomTraj(rng, 4, 3.0, Frame::kGlobal));
    const Trajectory gt = testing::RandomTraj(rng, 4, 3.0, Frame::kGlobal);
    const PredictionSet p = Preds(trajs);
    for (std::size_t k = 1; k < 6; ++k) {
      EXPECT_LE(MissRateSingle(p, gt, k + 1, 2.0), MissRateSingle(p, gt, k, 2.0));
    }
    for (double d = 0.5; d < 8.0; d += 0.5) {
      EXPECT_LE(MissRateSingle(p, gt, 3, d + 0.5), MissRateSingle(p, gt, 3, d));
    }
    const double minmax = MinMaxDistance(p, gt, 6);
    double naive = std::numeric_limits<double>::infinity();
    for (const auto& tr : trajs) naive = std::min(naive, NaiveMaxL2(tr, gt));
    EXPECT_NEAR(minmax, naive, 1e-12);
  }
}

TEST(DacTest, Examples) {
  const PolygonSet road = Band(2.0);
  EXPECT_EQ(Dac(Preds({GStraight(0), GStraight(1), GStraight(-1)}), road), 1.0);
  EXPECT_DOUBLE_EQ(
      Dac(Preds({GStraight(0), GStraight(1), GStraight(-1), GStraight(0.5), GStraight(5)}),
          road),
      0.8);
  EXPECT_EQ(Dac(Preds({GStraight(0)}), PolygonSet{}), 0.0);
  EXPECT_THROW(Dac(PredictionSet{}, road), ContractViolation);
}

TEST(DacTest, MatchesBruteForceCount) {
  Rng rng(3);
  const PolygonSet road = Band(2.0);
  for (int t = 0; t < 50; ++t) {
    std::vector<Trajectory> trajs;
    int off = 0;
    for (int i = 0; i < 7; ++i) {
      Trajectory tr = GStraight(rng.Uniform(-4.0, 4.0));
      trajs.push_back(tr);
      if (!TrajectoryOnRoad(tr, road)) ++off;
    }
    EXPECT_DOUBLE_EQ(Dac(Preds(trajs), road), 1.0 - off / 7.0);
  }
}

TEST(DacByRankTest, Examples) {
  const PolygonSet road = Band(2.0);
  std::vector<PredictionSet> batch = {Preds({GStraight(0), GStraight(5)}),
                                      Preds({GStraight(1), GStraight(-6)})};
  std::vector<PolygonSet> areas = {road, road};
  EXPECT_EQ(DacByRank(batch, areas), (std::vector<double>{1.0, 0.0}));
  std::vector<PredictionSet> all_on = {Preds({GStraight(0), GStraight(1), GStraight(-1)})};
  EXPECT_EQ(DacByRank(all_on, std::vector<PolygonSet>{road}), (std::vector<double>(3, 1.0)));
  EXPECT_EQ(DacByRank(batch, areas, 1), (std::vector<double>{1.0}));
  std::vector<PredictionSet> ragged = {Preds({GStraight(0)}), Preds({GStraight(0), GStraight(1)})};
  EXPECT_THROW(DacByRank(ragged, areas), ContractViolation);
  EXPECT_THROW(DacByRank(ragged, areas, 2), ContractViolation);
  EXPECT_EQ(DacByRank(ragged, areas, 1), (std::vector<double>{1.0}));
}

TEST(DacByRankTest, SingleInstanceIsBinary) {
  Rng rng(4);
  const PolygonSet road = Band(2.0);
  std::vector<Trajectory> trajs;
  for (int i = 0; i < 6; ++i) trajs.push_back(GStraight(rng.Uniform(-4.0, 4.0)));
  for (double v : DacByRank(std::vector<PredictionSet>{Preds(trajs)},
                            std::vector<PolygonSet>{road})) {
    EXPECT_TRUE(v == 0.0 || v == 1.0);
  }
}

TEST(ModeDistanceTest, Examples) {
  EXPECT_EQ(MeanModeDistance(Preds({GStraight(1), GStraight(1), GStraight(1)}), 3), 0.0);
  EXPECT_DOUBLE_EQ(MeanModeDistance(Preds({GStraight(0), GStraight(2)}), 2), 2.0);
  EXPECT_DOUBLE_EQ(MeanModeDistance(Preds({GStraight(0), GStraight(1), GStraight(3)}), 3), 2.0);
  EXPECT_THROW(MeanModeDistance(Preds({GStraight(0), GStraight(2)}), 3), ContractViolation);
  EXPECT_THROW(MeanModeDistance(Preds({GStraight(0), GStraight(2)}), 1), ContractViolation);
}

TEST(ModeDistanceTest, MatchesPairwiseOracle) {
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    std::vector<Trajectory> trajs;
    for (int i = 0; i < 7; ++i) trajs.push_back(testing::RandomTraj(rng, 5, 4.0, Frame::kGlobal));
    double sum = 0.0;
    int pairs = 0;
    for (int i = 0; i < 5; ++i) {
      for (int j = i + 1; j < 5; ++j) {
        sum += NaiveMeanL2(trajs[i], trajs[j]);
        ++pairs;
      }
    }
    EXPECT_NEAR(MeanModeDistance(Preds(trajs)), sum / pairs, 1e-12);
  }
}

TEST(ResidualNormsTest, Examples) {
  const ResidualNorms zero = ResidualVectorNorms(std::vector<double>(6, 0.0));
  EXPECT_EQ(zero.mean_l1, 0.0);
  EXPECT_EQ(zero.mean_linf, 0.0);
  const ResidualNorms half = ResidualVectorNorms(std::vector<double>(6, 0.5));
  EXPECT_DOUBLE_EQ(half.mean_linf, 0.5);
  EXPECT_DOUBLE_EQ(half.mean_l1, 0.5);
  const ResidualNorms crafted = ResidualVectorNorms(std::vector<double>{1.0, -3.0, 0.5, 0.5});
  EXPECT_DOUBLE_EQ(crafted.mean_l1, 5.0 / 4.0);
  EXPECT_DOUBLE_EQ(crafted.mean_linf, 3.0);
  EXPECT_THROW(ResidualVectorNorms(std::vector<double>{}), ContractViolation);
}

TEST(PredictionSetTest, Validation) {
  PredictionSet ok = Preds({GStraight(0), GStraight(1)});
  EXPECT_NO_THROW(ValidatePredictionSet(ok));
  PredictionSet rising = ok;
  std::swap(rising.entries[0].probability, rising.entries[1].probability);
  EXPECT_THROW(ValidatePredictionSet(rising), ContractViolation);
  PredictionSet big = ok;
  big.entries[0].probability = 1.5;
  EXPECT_THROW(ValidatePredictionSet(big), ContractViolation);
}

}  // namespace
}  // namespace trajcover
