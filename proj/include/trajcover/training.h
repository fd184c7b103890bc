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

#ifndef TRAJCOVER_TRAINING_H_
#define TRAJCOVER_TRAINING_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trajcover/losses.h"
#include "trajcover/metrics.h"
#include "trajcover/nnmodel.h"
#include "trajcover/raster.h"
#include "trajcover/scene.h"

namespace trajcover {

enum class LossVariant { kCe, kWceMax, kWceMean, kAvoidNearby };

std::string_view LossVariantName(LossVariant variant);
LossVariant ParseLossVariant(std::string_view name);

struct TrainConfig {
  int epochs = 20;
  int batch_size = 32;
  double lr0 = 1e-3;
  double lr_decay = 0.9;  // multiplicative, per epoch
  double lambda_offroad = 0.0;
  LossVariant loss_variant = LossVariant::kCe;
  double threshold = 2.0;  // meters, weighted cross-entropy variants
  double avoid_nearby_exclusion = 2.0;
  double data_fraction = 1.0;  // (0, 1]
  // Batch gradients with a larger global L2 norm are rescaled to this norm;
  // 0 disables clipping.
  double clip_norm = 0.0;
  std::uint64_t seed = 0;
};

void ValidateTrainConfig(const TrainConfig& cfg);

// lr0 * lr_decay^epoch.
double LrAt(int epoch, const TrainConfig& cfg);

// One model input plus everything a loss needs.
struct Example {
  std::string scene_id;
  std::vector<double> input;
  // Target future in the agent frame; absent for map-only examples.
  std::optional<Trajectory> future;
  OnRoadMask mask;
  PolygonSet drivable;  // global frame, for evaluation
  Pose2 pose;           // target pose at t_now
};

struct Dataset {
  std::vector<Example> examples;

  std::size_t size() const { return examples.size(); }
};

// On-road mask of every set member placed at `pose`.
OnRoadMask ComputeOnRoadMask(const TrajectorySet& set, const Pose2& pose,
                             const PolygonSet& drivable,
                             double sample_step = kDefaultSampleStep);

// Renders each scene (kFull, or kMapOnly for pretraining data), downsamples
// to the model grid and computes the on-road mask. Map-only examples carry
// no future and zero kinematics. Runs in parallel over scenes.
Dataset BuildDataset(std::span<const Scene> scenes, const TrajectorySet& set,
                     const ModelConfig& model_config, RenderMode mode,
                     const RasterConfig& raster = {});

// Classification target for one example under the configured variant.
std::vector<double> ClassificationTarget(const TrajectorySet& set,
                                         const Trajectory& future_agent,
                                         const TrainConfig& cfg);

struct ExampleLoss {
  double loss = 0.0;
  double ce_term = 0.0;  // classification (+ weighted regression) term
  double offroad_term = 0.0;
  std::vector<double> output_grad;
};

// Loss of one example given the model output. With `pretrain` only the
// off-road term is used (weight 1) and the future is never read.
ExampleLoss ComputeExampleLoss(const TrajectoryModel& model,
                               std::span<const double> output,
                               const Example& example,
                               std::span<const double> target,
                               const TrainConfig& cfg, bool pretrain);

struct LossLogRow {
  int epoch = 0;
  int step = 0;
  double loss = 0.0;
  double ce_term = 0.0;
  double offroad_term = 0.0;
};

struct TrainResult {
  std::vector<LossLogRow> log;
  std::size_t examples_used = 0;
};

// ceil(fraction * n) examples from a seeded permutation, kept in dataset
// order.
std::vector<std::size_t> SelectFraction(std::size_t n, double fraction,
                                        std::uint64_t seed);

// Plain minibatch SGD over a seeded shuffle; the batch gradient is the mean of
// per-example gradients accumulated in batch order.
TrainResult Train(TrajectoryModel& model, const Dataset& data,
                  const TrainConfig& cfg);

// Optimizes the off-road loss only; never consults futures.
TrainResult PretrainMapOnly(TrajectoryModel& model, const Dataset& map_data,
                            const TrainConfig& cfg);

// Mean loss over a dataset without updating the model.
double EvaluateLoss(const TrajectoryModel& model, const Dataset& data,
                    const TrainConfig& cfg, bool pretrain);

// Top k modes by probability (ties by index), mapped to the global frame.
// Regression heads add the predicted residual to each anchor.
PredictionSet PredictFromInput(const TrajectoryModel& model,
                               std::span<const double> input,
                               const Pose2& pose, std::size_t k);
PredictionSet PredictTopK(const TrajectoryModel& model, const SceneContext& ctx,
                          std::size_t k, const RasterConfig& raster = {});

// Mean over examples of the matched anchor's predicted residual norms.
ResidualNorms ResidualStats(const TrajectoryModel& model, const Dataset& data);

std::string LossLogCsv(const std::vector<LossLogRow>& log);

}  // namespace trajcover

#endif  // TRAJCOVER_TRAINING_H_
