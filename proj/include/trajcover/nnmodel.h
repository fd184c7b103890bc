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

#ifndef TRAJCOVER_NNMODEL_H_
#define TRAJCOVER_NNMODEL_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trajcover/physics.h"
#include "trajcover/trajset.h"

namespace trajcover {

enum class HeadKind { kClassification, kOrdinalRegression };

std::string_view HeadKindName(HeadKind head);
HeadKind ParseHeadKind(std::string_view name);

struct ModelConfig {
  int grid_rows = 25;  // raster downsampling grid
  int grid_cols = 25;
  std::vector<int> hidden_sizes = {256, 256};
  HeadKind head = HeadKind::kClassification;
  std::uint64_t seed = 0;
};

// Positive grid, at least one hidden layer, positive widths.
void ValidateModelConfig(const ModelConfig& config);

// Speed, acceleration and yaw rate are appended to the raster features,
// divided by these fixed scales.
inline constexpr int kKinematicInputs = 3;
inline constexpr double kSpeedScale = 10.0;
inline constexpr double kAccelScale = 2.0;
inline constexpr double kYawRateScale = 0.5;

std::vector<double> AssembleInput(std::span<const double> features,
                                  const AgentKinematics& kin);

struct DenseLayer {
  int inputs = 0;
  int outputs = 0;
  std::vector<double> weights;  // outputs x inputs, row-major
  std::vector<double> bias;
};

// Per-layer parameter gradients, shaped like the model's layers.
struct Gradients {
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> bias;

  void SetZero();
  // Global L2 norm over every parameter gradient.
  double Norm() const;
};

// Layer inputs recorded by Forward for Backward.
struct ForwardCache {
  std::vector<std::vector<double>> inputs;  // inputs[l] feeds layer l
  std::vector<double> output;
};

// Fully connected ReLU network with a linear output layer over
// (raster features, kinematics). The output holds |K| mode logits, followed
// for the ordinal-regression head by |K| x N x 2 residuals.
class TrajectoryModel {
 public:
  // Weights are drawn uniformly in +-1/sqrt(fan_in) from config.seed; biases
  // start at zero.
  TrajectoryModel(ModelConfig config, TrajectorySet anchors);
  TrajectoryModel(ModelConfig config, TrajectorySet anchors,
                  std::vector<DenseLayer> layers);

  const ModelConfig& config() const { return config_; }
  const TrajectorySet& anchors() const { return anchors_; }
  std::size_t num_modes() const { return anchors_.size(); }
  std::size_t input_size() const;
  std::size_t output_size() const;

  std::vector<DenseLayer>& layers() { return layers_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }

  std::vector<double> Forward(std::span<const double> input) const;
  void Forward(std::span<const double> input, ForwardCache& cache) const;

  // Adds scale * d(loss)/d(params) to `grads`, given d(loss)/d(output).
  void Backward(const ForwardCache& cache, std::span<const double> output_grad,
                double scale, Gradients& grads) const;

  Gradients ZeroGradients() const;

  // params -= step * grads
  void ApplyUpdate(const Gradients& grads, double step);

  std::span<const double> Logits(std::span<const double> output) const;
  std::span<const double> Residuals(std::span<const double> output) const;

 private:
  ModelConfig config_;
  TrajectorySet anchors_;
  std::vector<DenseLayer> layers_;
};

// Checkpoint: JSON with a config echo, the anchor set and every layer's
// weights and biases (17 significant digits, so save/load is exact).
std::string ModelToJson(const TrajectoryModel& model);
TrajectoryModel ModelFromJson(const std::string& text);
void SaveModel(const TrajectoryModel& model, const std::filesystem::path& path);
TrajectoryModel LoadModel(const std::filesystem::path& path);

}  // namespace trajcover

#endif  // TRAJCOVER_NNMODEL_H_
