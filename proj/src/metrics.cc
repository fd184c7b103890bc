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
#include <cmath>
#include <limits>

#include "trajcover/contract.h"

namespace trajcover {
namespace {

void CheckTopK(const PredictionSet& preds, std::size_t k) {
  Require(!preds.entries.empty(), "prediction set is empty");
  Require(k >= 1 && k <= preds.size(), "k exceeds the number of predictions");
}

}  // namespace

void ValidatePredictionSet(const PredictionSet& preds) {
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const double p = preds.entries[i].probability;
    Require(p >= 0.0 && p <= 1.0, "prediction probability outside [0, 1]");
    if (i > 0) {
      Require(p <= preds.entries[i - 1].probability,
              "predictions must be ordered by descending probability");
    }
  }
}

double MinAde(const PredictionSet& preds, const Trajectory& gt, std::size_t k) {
  CheckTopK(preds, k);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k; ++i) {
    best = std::min(best, MeanL2(preds.entries[i].trajectory, gt));
  }
  return best;
}

double MinMaxDistance(const PredictionSet& preds, const Trajectory& gt,
                      std::size_t k) {
  CheckTopK(preds, k);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k; ++i) {
    best = std::min(best, MaxL2(preds.entries[i].trajectory, gt));
  }
  return best;
}

int MissRateSingle(const PredictionSet& preds, const Trajectory& gt,
                   std::size_t k, double d) {
  Require(d > 0.0, "miss distance must be > 0");
  return MinMaxDistance(preds, gt, k) > d ? 1 : 0;
}

double Dac(const PredictionSet& preds, const PolygonSet& area,
           double sample_step) {
  Require(!preds.entries.empty(), "prediction set is empty");
  std::size_t on_road = 0;
  for (const Prediction& p : preds.entries) {
    if (TrajectoryOnRoad(p.trajectory, area, sample_step)) ++on_road;
  }
  return static_cast<double>(on_road) / static_cast<double>(preds.size());
}

std::vector<double> DacByRank(std::span<const PredictionSet> batch,
                              std::span<const PolygonSet> areas,
                              std::size_t ranks, double sample_step) {
  Require(batch.size() == areas.size(), "one drivable area per instance");
  Require(!batch.empty(), "batch is empty");
  if (ranks == 0) {
    ranks = batch[0].size();
    for (const PredictionSet& p : batch) {
      Require(p.size() == ranks, "ragged prediction batch");
    }
  }
  for (const PredictionSet& p : batch) {
    Require(p.size() >= ranks, "prediction set shorter than the rank count");
  }
  std::vector<double> out(ranks, 0.0);
  for (std::size_t r = 0; r < ranks; ++r) {
    std::size_t on_road = 0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
      if (TrajectoryOnRoad(batch[i].entries[r].trajectory, areas[i], sample_step)) {
        ++on_road;
      }
    }
    out[r] = static_cast<double>(on_road) / static_cast<double>(batch.size());
  }
  return out;
}

double MeanModeDistance(const PredictionSet& preds, std::size_t k) {
  Require(k >= 2, "mode distance needs k >= 2");
  Require(k <= preds.size(), "k exceeds the number of predictions");
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      sum += MeanL2(preds.entries[i].trajectory, preds.entries[j].trajectory);
      ++pairs;
    }
  }
  return sum / static_cast<double>(pairs);
}

ResidualNorms ResidualVectorNorms(std::span<const double> residual) {
  Require(!residual.empty(), "residual vector is empty");
  ResidualNorms out;
  for (double r : residual) {
    out.mean_l1 += std::abs(r);
    out.mean_linf = std::max(out.mean_linf, std::abs(r));
  }
  out.mean_l1 /= static_cast<double>(residual.size());
  return out;
}

}  // namespace trajcover
