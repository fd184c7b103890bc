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

#ifndef TRAJCOVER_LOSSES_H_
#define TRAJCOVER_LOSSES_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "trajcover/trajset.h"

namespace trajcover {

// 1 at entry k iff set member k, placed at the agent's pose, stays inside the
// drivable area.
using OnRoadMask = std::vector<std::uint8_t>;

struct LossAndGrad {
  double loss = 0.0;
  std::vector<double> grad;
};

// Max-subtracted softmax.
std::vector<double> Softmax(std::span<const double> logits);

std::vector<double> OneHot(std::size_t size, std::size_t index);

// loss = -sum_k w_k log softmax(x)_k, grad = softmax(x) - w. The target must
// be nonnegative and sum to 1 within 1e-9.
LossAndGrad CrossEntropy(std::span<const double> logits,
                         std::span<const double> target);

struct WeightedTarget {
  std::vector<double> weights;
  // No distance was within the threshold; weights are one-hot on the argmin.
  bool fallback = false;
};

// Inverse-distance weights over members within `threshold` meters (distance
// clamped below at 1e-6), normalized to sum 1.
WeightedTarget WceTarget(std::span<const double> distances, double threshold);

// Closest member gets raw weight 1, other members within `exclusion` meters
// get 0, the rest 1/set_size; normalized to sum 1.
std::vector<double> AvoidNearbyTarget(std::span<const double> distances,
                                      double exclusion = 2.0);

// Sum over modes of the binary cross-entropy between sigmoid(x_k) and r_k,
// with log arguments clamped at 1e-12. grad_k = sigmoid(x_k) - r_k.
LossAndGrad OffroadLoss(std::span<const double> logits, const OnRoadMask& mask);

struct CombinedLoss {
  double loss = 0.0;
  double ce_term = 0.0;
  double offroad_term = 0.0;  // unweighted
  std::vector<double> grad;
};

// Classification loss plus lambda times the off-road loss.
CombinedLoss TotalLoss(std::span<const double> logits,
                       std::span<const double> target, const OnRoadMask& mask,
                       double lambda);

inline constexpr double kSmoothL1Beta = 1.0;

double SmoothL1(double x, double beta = kSmoothL1Beta);
double SmoothL1Derivative(double x, double beta = kSmoothL1Beta);

struct OrdinalLoss {
  double loss = 0.0;
  double ce_term = 0.0;
  double regression_term = 0.0;
  std::size_t matched = 0;  // anchor closest to the ground truth
  std::vector<double> grad_logits;
  std::vector<double> grad_residuals;  // |K| x N x 2, zero except `matched`
};

// Anchor classification plus smooth-l1 regression of the matched anchor's
// residuals toward (ground truth - anchor). `residuals` is laid out
// [mode][point][x, y]. `ground_truth` is in the agent frame.
OrdinalLoss OrdinalRegressionLoss(std::span<const double> logits,
                                  std::span<const double> residuals,
                                  const TrajectorySet& anchors,
                                  const Trajectory& ground_truth,
                                  double alpha = 1.0,
                                  double beta = kSmoothL1Beta);

}  // namespace trajcover

#endif  // TRAJCOVER_LOSSES_H_
