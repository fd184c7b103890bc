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

#include <algorithm>
#include <cmath>
#include <limits>

#include "trajcover/contract.h"

namespace trajcover {
namespace {

constexpr double kLogClamp = 1e-12;
constexpr double kDistanceClamp = 1e-6;

double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void CheckFinite(std::span<const double> values, const char* what) {
  for (double v : values) Require(std::isfinite(v), what);
}

std::vector<double> Normalized(std::vector<double> raw) {
  double sum = 0.0;
  for (double w : raw) sum += w;
  for (double& w : raw) w /= sum;
  return raw;
}

std::size_t ArgMin(std::span<const double> values) {
  return static_cast<std::size_t>(
      std::min_element(values.begin(), values.end()) - values.begin());
}

}  // namespace

std::vector<double> Softmax(std::span<const double> logits) {
  CheckFinite(logits, "logits must be finite");
  std::vector<double> p(logits.begin(), logits.end());
  if (p.empty()) return p;
  const double peak = *std::max_element(p.begin(), p.end());
  double sum = 0.0;
  for (double& v : p) {
    v = std::exp(v - peak);
    sum += v;
  }
  for (double& v : p) v /= sum;
  return p;
}

std::vector<double> OneHot(std::size_t size, std::size_t index) {
  Require(index < size, "one-hot index out of range");
  std::vector<double> v(size, 0.0);
  v[index] = 1.0;
  return v;
}

LossAndGrad CrossEntropy(std::span<const double> logits,
                         std::span<const double> target) {
  Require(logits.size() == target.size() && !logits.empty(),
          "logits and target sizes differ");
  double total = 0.0;
  for (double w : target) {
    Require(w >= 0.0, "target weights must be nonnegative");
    total += w;
  }
  Require(std::abs(total - 1.0) <= 1e-9, "target distribution must sum to 1");

  const double peak = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double x : logits) sum += std::exp(x - peak);
  const double log_norm = peak + std::log(sum);

  LossAndGrad out;
  out.grad.resize(logits.size());
  for (std::size_t k = 0; k < logits.size(); ++k) {
    const double log_p = logits[k] - log_norm;
    if (target[k] > 0.0) out.loss -= target[k] * log_p;
    out.grad[k] = std::exp(log_p) - target[k];
  }
  return out;
}

WeightedTarget WceTarget(std::span<const double> distances, double threshold) {
  Require(!distances.empty(), "distances are empty");
  WeightedTarget out;
  out.weights.assign(distances.size(), 0.0);
  bool any = false;
  for (std::size_t k = 0; k < distances.size(); ++k) {
    Require(distances[k] >= 0.0, "distances must be nonnegative");
    if (distances[k] <= threshold) {
      out.weights[k] = 1.0 / std::max(distances[k], kDistanceClamp);
      any = true;
    }
  }
  if (!any) {
    out.weights = OneHot(distances.size(), ArgMin(distances));
    out.fallback = true;
    return out;
  }
  out.weights = Normalized(std::move(out.weights));
  return out;
}

std::vector<double> AvoidNearbyTarget(std::span<const double> distances,
                                      double exclusion) {
  Require(!distances.empty(), "distances are empty");
  const std::size_t closest = ArgMin(distances);
  const double rest = 1.0 / static_cast<double>(distances.size());
  std::vector<double> raw(distances.size());
  for (std::size_t k = 0; k < distances.size(); ++k) {
    if (k == closest) {
      raw[k] = 1.0;
    } else {
      raw[k] = distances[k] <= exclusion ? 0.0 : rest;
    }
  }
  return Normalized(std::move(raw));
}

LossAndGrad OffroadLoss(std::span<const double> logits, const OnRoadMask& mask) {
  Require(logits.size() == mask.size(), "logits and mask sizes differ");
  LossAndGrad out;
  out.grad.resize(logits.size());
  for (std::size_t k = 0; k < logits.size(); ++k) {
    Require(mask[k] <= 1, "mask entries must be 0 or 1");
    const double p = Sigmoid(logits[k]);
    const double q = Sigmoid(-logits[k]);  // 1 - p without cancellation
    const double r = mask[k];
    out.loss -= r * std::log(std::max(p, kLogClamp)) +
                (1.0 - r) * std::log(std::max(q, kLogClamp));
    out.grad[k] = p - r;
  }
  return out;
}

CombinedLoss TotalLoss(std::span<const double> logits,
                       std::span<const double> target, const OnRoadMask& mask,
                       double lambda) {
  Require(lambda >= 0.0, "lambda must be >= 0");
  LossAndGrad ce = CrossEntropy(logits, target);
  CombinedLoss out{.loss = ce.loss, .ce_term = ce.loss, .offroad_term = 0.0,
                   .grad = std::move(ce.grad)};
  if (lambda > 0.0) {
    const LossAndGrad off = OffroadLoss(logits, mask);
    out.offroad_term = off.loss;
    out.loss += lambda * off.loss;
    for (std::size_t k = 0; k < out.grad.size(); ++k) {
      out.grad[k] += lambda * off.grad[k];
    }
  } else {
    out.offroad_term = OffroadLoss(logits, mask).loss;
  }
  return out;
}

double SmoothL1(double x, double beta) {
  Require(beta > 0.0, "beta must be > 0");
  const double a = std::abs(x);
  return a < beta ? 0.5 * x * x / beta : a - 0.5 * beta;
}

double SmoothL1Derivative(double x, double beta) {
  Require(beta > 0.0, "beta must be > 0");
  if (std::abs(x) < beta) return x / beta;
  return x > 0.0 ? 1.0 : -1.0;
}

OrdinalLoss OrdinalRegressionLoss(std::span<const double> logits,
                                  std::span<const double> residuals,
                                  const TrajectorySet& anchors,
                                  const Trajectory& ground_truth, double alpha,
                                  double beta) {
  const std::size_t modes = anchors.size();
  const std::size_t n = anchors.points_per_trajectory();
  Require(logits.size() == modes, "logit count does not match the anchor set");
  Require(residuals.size() == modes * n * 2,
          "residual count does not match the anchor set");

  OrdinalLoss out;
  out.matched = ClosestMatch(anchors, ground_truth);
  LossAndGrad ce = CrossEntropy(logits, OneHot(modes, out.matched));
  out.ce_term = ce.loss;
  out.grad_logits = std::move(ce.grad);
  out.grad_residuals.assign(residuals.size(), 0.0);

  const Trajectory& anchor = anchors[out.matched];
  const std::size_t base = out.matched * n * 2;
  for (std::size_t i = 0; i < n; ++i) {
    const double err_x =
        residuals[base + 2 * i] - (ground_truth.points[i].x - anchor.points[i].x);
    const double err_y = residuals[base + 2 * i + 1] -
                         (ground_truth.points[i].y - anchor.points[i].y);
    out.regression_term += SmoothL1(err_x, beta) + SmoothL1(err_y, beta);
    out.grad_residuals[base + 2 * i] = alpha * SmoothL1Derivative(err_x, beta);
    out.grad_residuals[base + 2 * i + 1] = alpha * SmoothL1Derivative(err_y, beta);
  }
  out.loss = out.ce_term + alpha * out.regression_term;
  return out;
}

}  // namespace trajcover
