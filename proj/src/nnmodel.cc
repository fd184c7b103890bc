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

#include "trajcover/nnmodel.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "json.hpp"
#include "trajcover/contract.h"
#include "trajcover/json_util.h"
#include "trajcover/rng.h"
#include "trajcover/simd/kernels.h"

namespace trajcover {
namespace {

std::vector<DenseLayer> InitLayers(const ModelConfig& config,
                                   std::size_t inputs, std::size_t outputs) {
  Require(!config.hidden_sizes.empty(), "at least one hidden layer required");
  std::vector<int> sizes{static_cast<int>(inputs)};
  for (int h : config.hidden_sizes) {
    Require(h > 0, "hidden layer widths must be positive");
    sizes.push_back(h);
  }
  sizes.push_back(static_cast<int>(outputs));

  Rng rng(DeriveSeed("model-init", config.seed));
  std::vector<DenseLayer> layers;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    DenseLayer layer{.inputs = sizes[l], .outputs = sizes[l + 1],
                     .weights = {}, .bias = {}};
    const double bound = 1.0 / std::sqrt(static_cast<double>(layer.inputs));
    layer.weights.resize(static_cast<std::size_t>(layer.inputs) * layer.outputs);
    for (double& w : layer.weights) w = rng.Uniform(-bound, bound);
    layer.bias.assign(layer.outputs, 0.0);
    layers.push_back(std::move(layer));
  }
  return layers;
}

void WriteArray(std::string& out, const std::vector<double>& values) {
  out += "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ",";
    out += FormatDouble(values[i]);
  }
  out += "]";
}

}  // namespace

std::string_view HeadKindName(HeadKind head) {
  return head == HeadKind::kClassification ? "classification"
                                           : "ordinal_regression";
}

HeadKind ParseHeadKind(std::string_view name) {
  if (name == "classification") return HeadKind::kClassification;
  if (name == "ordinal_regression") return HeadKind::kOrdinalRegression;
  throw ContractViolation("unknown head: " + std::string(name));
}

std::vector<double> AssembleInput(std::span<const double> features,
                                  const AgentKinematics& kin) {
  std::vector<double> input(features.begin(), features.end());
  input.push_back(kin.speed / kSpeedScale);
  input.push_back(kin.accel / kAccelScale);
  input.push_back(kin.yaw_rate / kYawRateScale);
  return input;
}

void Gradients::SetZero() {
  for (auto& w : weights) std::fill(w.begin(), w.end(), 0.0);
  for (auto& b : bias) std::fill(b.begin(), b.end(), 0.0);
}

double Gradients::Norm() const {
  double sq = 0.0;
  for (const auto& w : weights) {
    for (double g : w) sq += g * g;
  }
  for (const auto& b : bias) {
    for (double g : b) sq += g * g;
  }
  return std::sqrt(sq);
}

void ValidateModelConfig(const ModelConfig& config) {
  Require(config.grid_rows > 0 && config.grid_cols > 0,
          "feature grid must be positive");
  Require(!config.hidden_sizes.empty(), "at least one hidden layer required");
  for (int h : config.hidden_sizes) Require(h > 0, "hidden widths must be positive");
}

TrajectoryModel::TrajectoryModel(ModelConfig config, TrajectorySet anchors)
    : config_(std::move(config)), anchors_(std::move(anchors)) {
  ValidateModelConfig(config_);
  layers_ = InitLayers(config_, input_size(), output_size());
}

TrajectoryModel::TrajectoryModel(ModelConfig config, TrajectorySet anchors,
                                 std::vector<DenseLayer> layers)
    : config_(std::move(config)),
      anchors_(std::move(anchors)),
      layers_(std::move(layers)) {
  ValidateModelConfig(config_);
  Require(layers_.size() == config_.hidden_sizes.size() + 1,
          "layer count does not match the config");
  std::size_t expected_in = input_size();
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const DenseLayer& layer = layers_[l];
    const std::size_t expected_out = l + 1 < layers_.size()
                                         ? config_.hidden_sizes[l]
                                         : output_size();
    Require(static_cast<std::size_t>(layer.inputs) == expected_in &&
                static_cast<std::size_t>(layer.outputs) == expected_out &&
                layer.weights.size() == expected_in * expected_out &&
                layer.bias.size() == expected_out,
            "layer shapes do not match the config");
    expected_in = expected_out;
  }
}

std::size_t TrajectoryModel::input_size() const {
  return static_cast<std::size_t>(config_.grid_rows) * config_.grid_cols * 3 +
         kKinematicInputs;
}

std::size_t TrajectoryModel::output_size() const {
  const std::size_t k = anchors_.size();
  if (config_.head == HeadKind::kClassification) return k;
  return k * (2 * anchors_.points_per_trajectory() + 1);
}

std::vector<double> TrajectoryModel::Forward(std::span<const double> input) const {
  ForwardCache cache;
  Forward(input, cache);
  return std::move(cache.output);
}

void TrajectoryModel::Forward(std::span<const double> input,
                              ForwardCache& cache) const {
  Require(input.size() == input_size(), "model input has the wrong length");
  const simd::KernelTable& k = simd::ActiveKernels();
  cache.inputs.resize(layers_.size());
  cache.inputs[0].assign(input.begin(), input.end());
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const DenseLayer& layer = layers_[l];
    std::vector<double>& out =
        l + 1 < layers_.size() ? cache.inputs[l + 1] : cache.output;
    out.resize(layer.outputs);
    k.gemv(layer.weights.data(), cache.inputs[l].data(), layer.bias.data(),
           out.data(), layer.outputs, layer.inputs);
    if (l + 1 < layers_.size()) {
      for (double& v : out) v = std::max(v, 0.0);
    }
  }
}

void TrajectoryModel::Backward(const ForwardCache& cache,
                               std::span<const double> output_grad,
                               double scale, Gradients& grads) const {
  Require(output_grad.size() == output_size(), "output gradient has the wrong length");
  const simd::KernelTable& k = simd::ActiveKernels();
  std::vector<double> delta(output_grad.begin(), output_grad.end());
  std::vector<double> upstream;
  for (std::size_t l = layers_.size(); l-- > 0;) {
    const DenseLayer& layer = layers_[l];
    const std::vector<double>& x = cache.inputs[l];
    k.rank1_update(grads.weights[l].data(), delta.data(), x.data(), scale,
                   layer.outputs, layer.inputs);
    k.axpy(scale, delta.data(), grads.bias[l].data(), layer.outputs);
    if (l == 0) break;
    upstream.assign(layer.inputs, 0.0);
    k.gemv_transposed_acc(layer.weights.data(), delta.data(), upstream.data(),
                          layer.outputs, layer.inputs);
    // ReLU: x holds post-activation values of the previous layer.
    for (std::size_t i = 0; i < upstream.size(); ++i) {
      if (x[i] <= 0.0) upstream[i] = 0.0;
    }
    delta.swap(upstream);
  }
}

Gradients TrajectoryModel::ZeroGradients() const {
  Gradients g;
  for (const DenseLayer& layer : layers_) {
    g.weights.emplace_back(layer.weights.size(), 0.0);
    g.bias.emplace_back(layer.bias.size(), 0.0);
  }
  return g;
}

void TrajectoryModel::ApplyUpdate(const Gradients& grads, double step) {
  const simd::KernelTable& k = simd::ActiveKernels();
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    k.axpy(-step, grads.weights[l].data(), layers_[l].weights.data(),
           layers_[l].weights.size());
    k.axpy(-step, grads.bias[l].data(), layers_[l].bias.data(),
           layers_[l].bias.size());
  }
}

std::span<const double> TrajectoryModel::Logits(std::span<const double> output) const {
  return output.subspan(0, num_modes());
}

std::span<const double> TrajectoryModel::Residuals(
    std::span<const double> output) const {
  Require(config_.head == HeadKind::kOrdinalRegression,
          "classification head has no residuals");
  return output.subspan(num_modes());
}

std::string ModelToJson(const TrajectoryModel& model) {
  const ModelConfig& c = model.config();
  std::string out = "{\"format\": \"trajcover-model-v1\",\n\"config\": {";
  out += "\"grid_rows\": " + std::to_string(c.grid_rows);
  out += ", \"grid_cols\": " + std::to_string(c.grid_cols);
  out += ", \"hidden_sizes\": [";
  for (std::size_t i = 0; i < c.hidden_sizes.size(); ++i) {
    if (i > 0) out += ", ";
    out += std::to_string(c.hidden_sizes[i]);
  }
  out += "], \"head\": \"" + std::string(HeadKindName(c.head)) + "\"";
  out += ", \"seed\": " + std::to_string(c.seed) + "},\n";
  out += "\"anchors\": " + SetToJson(model.anchors());
  out += ",\n\"layers\": [";
  for (std::size_t l = 0; l < model.layers().size(); ++l) {
    const DenseLayer& layer = model.layers()[l];
    out += l == 0 ? "\n" : ",\n";
    out += "{\"inputs\": " + std::to_string(layer.inputs) +
           ", \"outputs\": " + std::to_string(layer.outputs) + ", \"weights\": ";
    WriteArray(out, layer.weights);
    out += ", \"bias\": ";
    WriteArray(out, layer.bias);
    out += "}";
  }
  out += "\n]}\n";
  return out;
}

TrajectoryModel ModelFromJson(const std::string& text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (j.value("format", "") != "trajcover-model-v1") {
      throw DataError("not a trajcover model checkpoint");
    }
    const auto& jc = j.at("config");
    ModelConfig config;
    config.grid_rows = jc.at("grid_rows").get<int>();
    config.grid_cols = jc.at("grid_cols").get<int>();
    config.hidden_sizes = jc.at("hidden_sizes").get<std::vector<int>>();
    config.head = ParseHeadKind(jc.at("head").get<std::string>());
    config.seed = jc.at("seed").get<std::uint64_t>();
    TrajectorySet anchors = SetFromJson(j.at("anchors").dump());
    std::vector<DenseLayer> layers;
    for (const auto& jl : j.at("layers")) {
      layers.push_back({.inputs = jl.at("inputs").get<int>(),
                        .outputs = jl.at("outputs").get<int>(),
                        .weights = jl.at("weights").get<std::vector<double>>(),
                        .bias = jl.at("bias").get<std::vector<double>>()});
    }
    return TrajectoryModel(std::move(config), std::move(anchors), std::move(layers));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model checkpoint: ") + e.what());
  } catch (const ContractViolation& e) {
    throw DataError(std::string("model checkpoint: ") + e.what());
  }
}

void SaveModel(const TrajectoryModel& model, const std::filesystem::path& path) {
  WriteTextFile(path, ModelToJson(model));
}

TrajectoryModel LoadModel(const std::filesystem::path& path) {
  return ModelFromJson(ReadTextFile(path));
}

}  // namespace trajcover
