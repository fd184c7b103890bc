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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "trajcover/contract.h"
#include "trajcover/json_util.h"
#include "trajcover/parallel.h"
#include "trajcover/rng.h"

namespace trajcover {
namespace {

const std::vector<double> kNoTarget;

TrainResult RunSgd(TrajectoryModel& model, const Dataset& data,
                   const std::vector<std::size_t>& selected,
                   const std::vector<std::vector<double>>& targets,
                   const TrainConfig& cfg, bool pretrain) {
  TrainResult result;
  result.examples_used = selected.size();
  Gradients grads = model.ZeroGradients();
  ForwardCache cache;
  int step = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double lr = LrAt(epoch, cfg);
    std::vector<std::size_t> order(selected.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(DeriveSeed("epoch-" + std::to_string(epoch), cfg.seed));
    rng.Shuffle(order);
    for (std::size_t begin = 0; begin < order.size();
         begin += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end =
          std::min(order.size(), begin + static_cast<std::size_t>(cfg.batch_size));
      const double scale = 1.0 / static_cast<double>(end - begin);
      grads.SetZero();
      LossLogRow row{.epoch = epoch, .step = step};
      for (std::size_t b = begin; b < end; ++b) {
        const std::size_t slot = order[b];
        const Example& ex = data.examples[selected[slot]];
        model.Forward(ex.input, cache);
        const ExampleLoss l =
            ComputeExampleLoss(model, cache.output, ex,
                               pretrain ? kNoTarget : targets[slot], cfg, pretrain);
        model.Backward(cache, l.output_grad, scale, grads);
        row.loss += scale * l.loss;
        row.ce_term += scale * l.ce_term;
        row.offroad_term += scale * l.offroad_term;
      }
      double step_size = lr;
      if (cfg.clip_norm > 0.0) {
        const double norm = grads.Norm();
        if (norm > cfg.clip_norm) step_size *= cfg.clip_norm / norm;
      }
      model.ApplyUpdate(grads, step_size);
      result.log.push_back(row);
      ++step;
    }
  }
  return result;
}

std::vector<std::vector<double>> ComputeTargets(
    const TrajectoryModel& model, const Dataset& data,
    const std::vector<std::size_t>& selected, const TrainConfig& cfg) {
  std::vector<std::vector<double>> targets(selected.size());
  if (model.config().head != HeadKind::kClassification) return targets;
  for (std::size_t i = 0; i < selected.size(); ++i) {
    const Example& ex = data.examples[selected[i]];
    Require(ex.future.has_value(), "training example has no future");
    targets[i] = ClassificationTarget(model.anchors(), *ex.future, cfg);
  }
  return targets;
}

}  // namespace

std::string_view LossVariantName(LossVariant variant) {
  switch (variant) {
    case LossVariant::kCe:
      return "ce";
    case LossVariant::kWceMax:
      return "wce_max";
    case LossVariant::kWceMean:
      return "wce_mean";
    case LossVariant::kAvoidNearby:
      return "avoid_nearby";
  }
  return "unknown";
}

LossVariant ParseLossVariant(std::string_view name) {
  for (LossVariant v : {LossVariant::kCe, LossVariant::kWceMax,
                        LossVariant::kWceMean, LossVariant::kAvoidNearby}) {
    if (LossVariantName(v) == name) return v;
  }
  throw ContractViolation("unknown loss variant: " + std::string(name));
}

void ValidateTrainConfig(const TrainConfig& cfg) {
  Require(cfg.epochs >= 0, "epochs must be >= 0");
  Require(cfg.batch_size >= 1, "batch size must be >= 1");
  Require(cfg.lr0 > 0.0 && cfg.lr_decay > 0.0, "learning rate must be > 0");
  Require(cfg.lambda_offroad >= 0.0, "lambda must be >= 0");
  Require(cfg.threshold > 0.0, "threshold must be > 0");
  Require(cfg.data_fraction > 0.0 && cfg.data_fraction <= 1.0,
          "data fraction must be in (0, 1]");
  Require(cfg.clip_norm >= 0.0, "clip norm must be >= 0");
}

double LrAt(int epoch, const TrainConfig& cfg) {
  Require(epoch >= 0, "epoch must be >= 0");
  return cfg.lr0 * std::pow(cfg.lr_decay, epoch);
}

OnRoadMask ComputeOnRoadMask(const TrajectorySet& set, const Pose2& pose,
                             const PolygonSet& drivable, double sample_step) {
  OnRoadMask mask(set.size(), 0);
  for (std::size_t k = 0; k < set.size(); ++k) {
    const Trajectory global =
        TransformToFrame(set[k], pose, FrameDirection::kToGlobal);
    mask[k] = TrajectoryOnRoad(global, drivable, sample_step) ? 1 : 0;
  }
  return mask;
}

Dataset BuildDataset(std::span<const Scene> scenes, const TrajectorySet& set,
                     const ModelConfig& model_config, RenderMode mode,
                     const RasterConfig& raster) {
  Dataset data;
  data.examples.resize(scenes.size());
  ParallelFor(scenes.size(), [&](std::size_t i) {
    const Scene& scene = scenes[i];
    const SceneContext& ctx = scene.context;
    Example& ex = data.examples[i];
    ex.scene_id = scene.scene_id;
    ex.pose = ctx.TargetState().pose;
    ex.drivable = ctx.map.drivable;
    const RasterImage image = Render(ctx, mode, raster);
    const std::vector<double> features =
        DownsampleFeatures(image, model_config.grid_rows, model_config.grid_cols);
    if (mode == RenderMode::kMapOnly) {
      AgentKinematics still;
      still.pose = ex.pose;
      ex.input = AssembleInput(features, still);
    } else {
      ex.input = AssembleInput(features, ctx.TargetKinematics());
      ex.future = FutureInAgentFrame(scene);
    }
    ex.mask = ComputeOnRoadMask(set, ex.pose, ctx.map.drivable);
  });
  return data;
}

std::vector<double> ClassificationTarget(const TrajectorySet& set,
                                         const Trajectory& future_agent,
                                         const TrainConfig& cfg) {
  switch (cfg.loss_variant) {
    case LossVariant::kCe:
      return OneHot(set.size(), ClosestMatch(set, future_agent));
    case LossVariant::kWceMax:
      return WceTarget(DistancesTo(set, future_agent, DistanceMetric::kMaxL2),
                       cfg.threshold)
          .weights;
    case LossVariant::kWceMean:
      return WceTarget(DistancesTo(set, future_agent, DistanceMetric::kMeanL2),
                       cfg.threshold)
          .weights;
    case LossVariant::kAvoidNearby:
      return AvoidNearbyTarget(
          DistancesTo(set, future_agent, DistanceMetric::kMeanL2),
          cfg.avoid_nearby_exclusion);
  }
  throw ContractViolation("unknown loss variant");
}

ExampleLoss ComputeExampleLoss(const TrajectoryModel& model,
                               std::span<const double> output,
                               const Example& example,
                               std::span<const double> target,
                               const TrainConfig& cfg, bool pretrain) {
  ExampleLoss out;
  out.output_grad.assign(model.output_size(), 0.0);
  const std::span<const double> logits = model.Logits(output);
  if (pretrain) {
    const LossAndGrad off = OffroadLoss(logits, example.mask);
    out.loss = off.loss;
    out.offroad_term = off.loss;
    std::copy(off.grad.begin(), off.grad.end(), out.output_grad.begin());
    return out;
  }
  Require(example.future.has_value(), "training example has no future");
  if (model.config().head == HeadKind::kClassification) {
    const CombinedLoss total =
        TotalLoss(logits, target, example.mask, cfg.lambda_offroad);
    out.loss = total.loss;
    out.ce_term = total.ce_term;
    out.offroad_term = total.offroad_term;
    std::copy(total.grad.begin(), total.grad.end(), out.output_grad.begin());
    return out;
  }
  const OrdinalLoss ord = OrdinalRegressionLoss(
      logits, model.Residuals(output), model.anchors(), *example.future);
  out.loss = ord.loss;
  out.ce_term = ord.loss;
  std::copy(ord.grad_logits.begin(), ord.grad_logits.end(),
            out.output_grad.begin());
  std::copy(ord.grad_residuals.begin(), ord.grad_residuals.end(),
            out.output_grad.begin() + static_cast<std::ptrdiff_t>(model.num_modes()));
  if (cfg.lambda_offroad > 0.0) {
    const LossAndGrad off = OffroadLoss(logits, example.mask);
    out.offroad_term = off.loss;
    out.loss += cfg.lambda_offroad * off.loss;
    for (std::size_t k = 0; k < off.grad.size(); ++k) {
      out.output_grad[k] += cfg.lambda_offroad * off.grad[k];
    }
  }
  return out;
}

std::vector<std::size_t> SelectFraction(std::size_t n, double fraction,
                                        std::uint64_t seed) {
  Require(fraction > 0.0 && fraction <= 1.0, "data fraction must be in (0, 1]");
  // The small slack keeps e.g. 0.7 * 100 from rounding up to 71.
  const auto count = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(n) - 1e-9));
  std::vector<std::size_t> order =
      SeededPermutation(n, DeriveSeed("data-fraction", seed));
  order.resize(std::min(n, count));
  std::sort(order.begin(), order.end());
  return order;
}

TrainResult Train(TrajectoryModel& model, const Dataset& data,
                  const TrainConfig& cfg) {
  ValidateTrainConfig(cfg);
  Require(data.size() > 0, "training dataset is empty");
  const std::vector<std::size_t> selected =
      SelectFraction(data.size(), cfg.data_fraction, cfg.seed);
  const auto targets = ComputeTargets(model, data, selected, cfg);
  return RunSgd(model, data, selected, targets, cfg, /*pretrain=*/false);
}

TrainResult PretrainMapOnly(TrajectoryModel& model, const Dataset& map_data,
                            const TrainConfig& cfg) {
  ValidateTrainConfig(cfg);
  Require(map_data.size() > 0, "pretraining dataset is empty");
  std::vector<std::size_t> all(map_data.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return RunSgd(model, map_data, all, {}, cfg, /*pretrain=*/true);
}

double EvaluateLoss(const TrajectoryModel& model, const Dataset& data,
                    const TrainConfig& cfg, bool pretrain) {
  Require(data.size() > 0, "dataset is empty");
  double total = 0.0;
  for (const Example& ex : data.examples) {
    const std::vector<double> output = model.Forward(ex.input);
    std::vector<double> target;
    if (!pretrain && model.config().head == HeadKind::kClassification) {
      target = ClassificationTarget(model.anchors(), *ex.future, cfg);
    }
    total += ComputeExampleLoss(model, output, ex, target, cfg, pretrain).loss;
  }
  return total / static_cast<double>(data.size());
}

PredictionSet PredictFromInput(const TrajectoryModel& model,
                               std::span<const double> input,
                               const Pose2& pose, std::size_t k) {
  Require(k >= 1 && k <= model.num_modes(), "k must be in [1, |K|]");
  const std::vector<double> output = model.Forward(input);
  const std::vector<double> probs = Softmax(model.Logits(output));
  std::vector<std::size_t> order(probs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return probs[a] > probs[b];
  });
  const bool regression = model.config().head == HeadKind::kOrdinalRegression;
  const std::size_t n = model.anchors().points_per_trajectory();
  PredictionSet out;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t mode = order[i];
    Trajectory local = model.anchors()[mode];
    if (regression) {
      const std::span<const double> res =
          model.Residuals(output).subspan(mode * n * 2, n * 2);
      for (std::size_t p = 0; p < n; ++p) {
        local.points[p].x += res[2 * p];
        local.points[p].y += res[2 * p + 1];
      }
    }
    out.entries.push_back(
        {TransformToFrame(local, pose, FrameDirection::kToGlobal), probs[mode]});
  }
  return out;
}

PredictionSet PredictTopK(const TrajectoryModel& model, const SceneContext& ctx,
                          std::size_t k, const RasterConfig& raster) {
  const RasterImage image = Render(ctx, RenderMode::kFull, raster);
  const std::vector<double> input = AssembleInput(
      DownsampleFeatures(image, model.config().grid_rows, model.config().grid_cols),
      ctx.TargetKinematics());
  return PredictFromInput(model, input, ctx.TargetState().pose, k);
}

ResidualNorms ResidualStats(const TrajectoryModel& model, const Dataset& data) {
  Require(model.config().head == HeadKind::kOrdinalRegression,
          "residual statistics need an ordinal-regression head");
  Require(data.size() > 0, "dataset is empty");
  const std::size_t n = model.anchors().points_per_trajectory();
  ResidualNorms mean;
  for (const Example& ex : data.examples) {
    Require(ex.future.has_value(), "example has no future");
    const std::vector<double> output = model.Forward(ex.input);
    const std::size_t k = ClosestMatch(model.anchors(), *ex.future);
    const ResidualNorms norms =
        ResidualVectorNorms(model.Residuals(output).subspan(k * n * 2, n * 2));
    mean.mean_l1 += norms.mean_l1;
    mean.mean_linf += norms.mean_linf;
  }
  mean.mean_l1 /= static_cast<double>(data.size());
  mean.mean_linf /= static_cast<double>(data.size());
  return mean;
}

std::string LossLogCsv(const std::vector<LossLogRow>& log) {
  std::string out = "epoch,step,loss,ce_term,offroad_term\n";
  for (const LossLogRow& r : log) {
    out += std::to_string(r.epoch) + "," + std::to_string(r.step) + "," +
           FormatDouble(r.loss) + "," + FormatDouble(r.ce_term) + "," +
           FormatDouble(r.offroad_term) + "\n";
  }
  return out;
}

}  // namespace trajcover
