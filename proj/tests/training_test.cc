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

#include "trajcover/training.h"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "test_util.h"
#include "trajcover/contract.h"
#include "trajcover/losses.h"
#include "trajcover/synthdata.h"
#include "trajcover/trajset.h"

namespace trajcover {
namespace {

struct Fixture {
  std::vector<Scene> scenes;
  TrajectorySet set;
  ModelConfig model_config;
  Dataset full;
  Dataset map_only;
};

const Fixture& Shared() {
  static const Fixture* fixture = [] {
    ScenarioSpec spec;
    spec.seed = 21;
    spec.n_scenes = 60;
    auto scenes = Generate(spec);
    std::vector<Trajectory> futures;
    for (const Scene& s : scenes) futures.push_back(FutureInAgentFrame(s));
    TrajectorySet set = BuildSet(futures, 3.0, DistanceMetric::kMaxL2);
    ModelConfig mc;
    mc.grid_rows = 5;
    mc.grid_cols = 5;
    mc.hidden_sizes = {32, 32};
    mc.seed = 5;
    auto* f = new Fixture{std::move(scenes), std::move(set), mc, {}, {}};
    f->full = BuildDataset(f->scenes, f->set, mc, RenderMode::kFull);
    f->map_only = BuildDataset(f->scenes, f->set, mc, RenderMode::kMapOnly);
    return f;
  }();
  return *fixture;
}

std::vector<double> Params(const TrajectoryModel& m) {
  std::vector<double> out;
  for (const DenseLayer& l : m.layers()) {
    out.insert(out.end(), l.weights.begin(), l.weights.end());
    out.insert(out.end(), l.bias.begin(), l.bias.end());
  }
  return out;
}

TEST(ScheduleTest, LearningRateDecaysPerEpoch) {
  TrainConfig cfg;
  cfg.lr0 = 1e-3;
  cfg.lr_decay = 0.9;
  EXPECT_DOUBLE_EQ(LrAt(0, cfg), 1e-3);
  EXPECT_NEAR(LrAt(1, cfg), 9e-4, 1e-15);
  EXPECT_NEAR(LrAt(2, cfg), 8.1e-4, 1e-15);
  EXPECT_THROW(LrAt(-1, cfg), ContractViolation);
}

TEST(ScheduleTest, ConfigValidation) {
  TrainConfig bad;
  bad.data_fraction = 0.0;
  EXPECT_THROW(ValidateTrainConfig(bad), ContractViolation);
  bad.data_fraction = 1.5;
  EXPECT_THROW(ValidateTrainConfig(bad), ContractViolation);
  TrainConfig batch;
  batch.batch_size = 0;
  EXPECT_THROW(ValidateTrainConfig(batch), ContractViolation);
  EXPECT_EQ(ParseLossVariant("wce_mean"), LossVariant::kWceMean);
  EXPECT_THROW(ParseLossVariant("focal"), ContractViolation);
}

TEST(DatasetTest, ExamplesMatchScenes) {
  const Fixture& f = Shared();
  ASSERT_EQ(f.full.size(), f.scenes.size());
  for (std::size_t i = 0; i < f.full.size(); ++i) {
    const Example& ex = f.full.examples[i];
    EXPECT_EQ(ex.scene_id, f.scenes[i].scene_id);
    EXPECT_EQ(ex.input.size(), 5u * 5u * 3u + 3u);
    ASSERT_TRUE(ex.future.has_value());
    EXPECT_EQ(ex.future->frame, Frame::kAgent);
    EXPECT_EQ(ex.mask.size(), f.set.size());
    EXPECT_FALSE(f.map_only.examples[i].future.has_value());
    EXPECT_EQ(f.map_only.examples[i].mask, ex.mask);
  }
}

TEST(DatasetTest, MaskAgreesWithOnRoadTest) {
  const Fixture& f = Shared();
  for (std::size_t i = 0; i < 10; ++i) {
    const Example& ex = f.full.examples[i];
    for (std::size_t k = 0; k < f.set.size(); ++k) {
      const Trajectory g = TransformToFrame(f.set[k], ex.pose, FrameDirection::kToGlobal);
      EXPECT_EQ(ex.mask[k] == 1, TrajectoryOnRoad(g, ex.drivable));
    }
  }
}

TEST(TrainTest, SingleExampleOverfits) {
  const Fixture& f = Shared();
  Dataset one;
  one.examples.push_back(f.full.examples[0]);
  TrajectoryModel m(f.model_config, f.set);
  TrainConfig cfg;
  cfg.epochs = 200;
  cfg.batch_size = 1;
  cfg.lr0 = 0.05;
  cfg.lr_decay = 1.0;
  const TrainResult r = Train(m, one, cfg);
  ASSERT_EQ(r.log.size(), 200u);
  EXPECT_LE(r.log.back().loss, 0.01);
  for (std::size_t s = 11; s < r.log.size(); ++s) {
    EXPECT_LE(r.log[s].loss, r.log[s - 1].loss + 1e-12) << "step " << s;
  }
  const std::size_t gt = ClosestMatch(f.set, *one.examples[0].future);
  const PredictionSet p = PredictFromInput(m, one.examples[0].input, Pose2{}, 1);
  EXPECT_EQ(p.entries[0].trajectory.points, f.set[gt].points);
}

TEST(TrainTest, DataFractionUsesCeilOfCount) {
  const Fixture& f = Shared();
  TrajectoryModel m(f.model_config, f.set);
  TrainConfig cfg;
  cfg.epochs = 1;
  cfg.data_fraction = 0.1;
  EXPECT_EQ(Train(m, f.full, cfg).examples_used, 6u);
  cfg.data_fraction = 0.11;
  EXPECT_EQ(Train(m, f.full, cfg).examples_used, 7u);
  EXPECT_EQ(SelectFraction(100, 0.7, 1).size(), 70u);
  EXPECT_EQ(SelectFraction(10, 0.01, 1).size(), 1u);
  const auto a = SelectFraction(50, 0.3, 9);
  EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
  EXPECT_EQ(a, SelectFraction(50, 0.3, 9));
}

TEST(TrainTest, ClippingCapsTheUpdateNorm) {
  const Fixture& f = Shared();
  TrainConfig cfg;
  cfg.epochs = 1;
  cfg.batch_size = static_cast<int>(f.full.size());
  cfg.lr0 = 0.5;
  cfg.lambda_offroad = 10.0;
  cfg.clip_norm = 1e-3;
  TrajectoryModel m(f.model_config, f.set);
  const std::vector<double> before = Params(m);
  Train(m, f.full, cfg);
  const std::vector<double> after = Params(m);
  double sq = 0.0;
  for (std::size_t i = 0; i < before.size(); ++i) sq += (after[i] - before[i]) * (after[i] - before[i]);
  EXPECT_NEAR(std::sqrt(sq), cfg.lr0 * cfg.clip_norm, 1e-9);
  cfg.clip_norm = -1.0;
  EXPECT_THROW(Train(m, f.full, cfg), ContractViolation);
}

TEST(TrainTest, Deterministic) {
  const Fixture& f = Shared();
  TrainConfig cfg;
  cfg.epochs = 2;
  cfg.batch_size = 8;
  cfg.seed = 77;
  cfg.lambda_offroad = 1.0;
  TrajectoryModel a(f.model_config, f.set);
  TrajectoryModel b(f.model_config, f.set);
  const TrainResult ra = Train(a, f.full, cfg);
  const TrainResult rb = Train(b, f.full, cfg);
  EXPECT_EQ(Params(a), Params(b));
  EXPECT_EQ(LossLogCsv(ra.log), LossLogCsv(rb.log));
  cfg.seed = 78;
  TrajectoryModel c(f.model_config, f.set);
  Train(c, f.full, cfg);
  EXPECT_NE(Params(a), Params(c));
}

TEST(TrainTest, FiftyStepsReduceLossForEveryVariant) {
  const Fixture& f = Shared();
  for (LossVariant v : {LossVariant::kCe, LossVariant::kWceMax, LossVariant::kWceMean,
                        LossVariant::kAvoidNearby}) {
    TrainConfig cfg;
    cfg.loss_variant = v;
    cfg.threshold = 3.0;
    cfg.epochs = 10;
    cfg.batch_size = 12;
    cfg.lr0 = 0.05;
    cfg.lr_decay = 1.0;
    TrajectoryModel m(f.model_config, f.set);
    const double before = EvaluateLoss(m, f.full, cfg, false);
    const TrainResult r = Train(m, f.full, cfg);
    EXPECT_EQ(r.log.size(), 50u);
    EXPECT_LT(EvaluateLoss(m, f.full, cfg, false), before) << LossVariantName(v);
  }
  ModelConfig reg = f.model_config;
  reg.head = HeadKind::kOrdinalRegression;
  TrajectoryModel m(reg, f.set);
  TrainConfig cfg;
  cfg.epochs = 10;
  cfg.batch_size = 12;
  cfg.lr0 = 0.01;
  cfg.lr_decay = 1.0;
  const double before = EvaluateLoss(m, f.full, cfg, false);
  Train(m, f.full, cfg);
  EXPECT_LT(EvaluateLoss(m, f.full, cfg, false), before);
}

double MeanOffroadScore(const TrajectoryModel& m, const Dataset& data, bool on_road) {
  double sum = 0.0;
  int count = 0;
  for (const Example& ex : data.examples) {
    const auto out = m.Forward(ex.input);
    const auto logits = m.Logits(out);
    for (std::size_t k = 0; k < logits.size(); ++k) {
      if ((ex.mask[k] == 1) != on_road) continue;
      sum += 1.0 / (1.0 + std::exp(-logits[k]));
      ++count;
    }
  }
  return sum / count;
}

TEST(PretrainTest, LearnsOnRoadScores) {
  const Fixture& f = Shared();
  TrajectoryModel m(f.model_config, f.set);
  TrainConfig cfg;
  cfg.epochs = 20;
  cfg.batch_size = 8;
  cfg.lr0 = 0.05;
  const double before = EvaluateLoss(m, f.map_only, cfg, true);
  const TrainResult r = PretrainMapOnly(m, f.map_only, cfg);
  EXPECT_LT(EvaluateLoss(m, f.map_only, cfg, true), before);
  EXPECT_LT(r.log.back().loss, r.log.front().loss);
  EXPECT_LT(MeanOffroadScore(m, f.map_only, false), MeanOffroadScore(m, f.map_only, true));
}

TEST(PretrainTest, IgnoresFutures) {
  const Fixture& f = Shared();
  Dataset stripped = f.full;
  for (Example& ex : stripped.examples) ex.future.reset();
  TrainConfig cfg;
  cfg.epochs = 2;
  cfg.batch_size = 8;
  TrajectoryModel a(f.model_config, f.set);
  TrajectoryModel b(f.model_config, f.set);
  PretrainMapOnly(a, f.full, cfg);
  PretrainMapOnly(b, stripped, cfg);
  EXPECT_EQ(Params(a), Params(b));
  EXPECT_THROW(Train(b, stripped, cfg), ContractViolation);
}

TEST(PretrainTest, CheckpointResumeMatchesInMemory) {
  const Fixture& f = Shared();
  TrainConfig cfg;
  cfg.epochs = 2;
  cfg.batch_size = 8;
  TrajectoryModel a(f.model_config, f.set);
  PretrainMapOnly(a, f.map_only, cfg);
  TrajectoryModel b = ModelFromJson(ModelToJson(a));
  Train(a, f.full, cfg);
  Train(b, f.full, cfg);
  EXPECT_EQ(Params(a), Params(b));
}

TEST(OffroadTest, LargeLambdaKeepsTopPredictionOnRoad) {
  const Fixture& f = Shared();
  TrajectoryModel m(f.model_config, f.set);
  TrainConfig cfg;
  cfg.epochs = 30;
  cfg.batch_size = 8;
  cfg.lr0 = 0.02;
  cfg.lambda_offroad = 100.0;
  Train(m, f.full, cfg);
  int on_road = 0;
  for (const Example& ex : f.full.examples) {
    const auto p = PredictFromInput(m, ex.input, ex.pose, 1);
    on_road += TrajectoryOnRoad(p.entries[0].trajectory, ex.drivable) ? 1 : 0;
  }
  EXPECT_GE(on_road, static_cast<int>(0.95 * f.full.size()));
}

TEST(ResidualStatsTest, ZeroModelHasZeroResiduals) {
  const Fixture& f = Shared();
  ModelConfig reg = f.model_config;
  reg.head = HeadKind::kOrdinalRegression;
  TrajectoryModel m(reg, f.set);
  for (DenseLayer& l : m.layers()) {
    std::fill(l.weights.begin(), l.weights.end(), 0.0);
    std::fill(l.bias.begin(), l.bias.end(), 0.0);
  }
  const ResidualNorms n = ResidualStats(m, f.full);
  EXPECT_EQ(n.mean_l1, 0.0);
  EXPECT_EQ(n.mean_linf, 0.0);
  EXPECT_THROW(ResidualStats(TrajectoryModel(f.model_config, f.set), f.full),
               ContractViolation);
}

TEST(LossLogTest, CsvHeader) {
  const std::vector<LossLogRow> log = {{0, 0, 1.5, 1.0, 0.5}};
  EXPECT_EQ(LossLogCsv(log), "epoch,step,loss,ce_term,offroad_term\n0,0,1.5,1,0.5\n");
}

}  // namespace
}  // namespace trajcover
