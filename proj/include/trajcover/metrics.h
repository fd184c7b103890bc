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

#ifndef TRAJCOVER_METRICS_H_
#define TRAJCOVER_METRICS_H_

#include <cstddef>
#include <span>
#include <vector>

#include "trajcover/geometry.h"

namespace trajcover {

struct Prediction {
  Trajectory trajectory;  // global frame
  double probability = 0.0;
};

// Ordered by descending probability.
struct PredictionSet {
  std::vector<Prediction> entries;

  std::size_t size() const { return entries.size(); }
};

// Throws unless probabilities are in [0, 1] and non-increasing.
void ValidatePredictionSet(const PredictionSet& preds);

// Minimum mean point-wise distance over the k most likely predictions.
double MinAde(const PredictionSet& preds, const Trajectory& gt, std::size_t k);

// Smallest max point-wise distance over the top k.
double MinMaxDistance(const PredictionSet& preds, const Trajectory& gt,
                      std::size_t k);

// 1 when no top-k prediction stays within d meters of the ground truth at
// every point (min over predictions of the max distance exceeds d), else 0.
int MissRateSingle(const PredictionSet& preds, const Trajectory& gt,
                   std::size_t k, double d);

// Fraction of predictions that stay on the drivable area.
double Dac(const PredictionSet& preds, const PolygonSet& area,
           double sample_step = kDefaultSampleStep);

// Element r is the DAC of the rank-r predictions across all instances; only
// the first `ranks` entries of each set are used (0 = all, sets must then
// share a size).
std::vector<double> DacByRank(std::span<const PredictionSet> batch,
                              std::span<const PolygonSet> areas,
                              std::size_t ranks = 0,
                              double sample_step = kDefaultSampleStep);

// Mean pairwise mean_l2 distance among the top k predictions.
double MeanModeDistance(const PredictionSet& preds, std::size_t k = 5);

struct ResidualNorms {
  double mean_l1 = 0.0;    // mean absolute residual coordinate
  double mean_linf = 0.0;  // largest absolute residual coordinate
};

// Norms of one residual vector (2N coordinates).
ResidualNorms ResidualVectorNorms(std::span<const double> residual);

}  // namespace trajcover

#endif  // TRAJCOVER_METRICS_H_
