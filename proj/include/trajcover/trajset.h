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

#ifndef TRAJCOVER_TRAJSET_H_
#define TRAJCOVER_TRAJSET_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trajcover/geometry.h"

namespace trajcover {

// Fixed list of agent-frame trajectories with a coverage radius. Immutable
// once built; members share point count and dt, and no two members coincide.
class TrajectorySet {
 public:
  // Validates the member invariants; throws ContractViolation.
  TrajectorySet(std::vector<Trajectory> members, double epsilon,
                DistanceMetric metric, std::size_t source_count);

  std::size_t size() const { return members_.size(); }
  const Trajectory& operator[](std::size_t k) const { return members_[k]; }
  const std::vector<Trajectory>& members() const { return members_; }
  double epsilon() const { return epsilon_; }
  DistanceMetric metric() const { return metric_; }
  std::size_t source_count() const { return source_count_; }
  std::size_t points_per_trajectory() const { return members_[0].size(); }
  double dt() const { return members_[0].dt; }

 private:
  std::vector<Trajectory> members_;
  double epsilon_;
  DistanceMetric metric_;
  std::size_t source_count_;
};

struct BuildOptions {
  // Candidates beyond this count are subsampled (seeded) before the
  // quadratic neighbourhood computation.
  std::size_t max_candidates = 60000;
  std::uint64_t seed = 0;
};

// Greedy epsilon-cover: repeatedly adds the candidate that covers the most
// still-uncovered candidates (lowest index wins ties) until every candidate is
// within epsilon of a member. Members keep insertion order.
TrajectorySet BuildSet(std::span<const Trajectory> candidates, double epsilon,
                       DistanceMetric metric, const BuildOptions& options = {});

// Bisects epsilon to find the smallest radius whose greedy cover has at most
// `target_size` members. Used to sweep anchor counts directly.
TrajectorySet BuildSetWithSize(std::span<const Trajectory> candidates,
                               std::size_t target_size, DistanceMetric metric,
                               const BuildOptions& options = {});

// Index of the member with the smallest mean_l2 to `ground_truth`; ties go to
// the lowest index.
std::size_t ClosestMatch(const TrajectorySet& set,
                         const Trajectory& ground_truth);

// Element k is metric(member_k, ground_truth).
std::vector<double> DistancesTo(const TrajectorySet& set,
                                const Trajectory& ground_truth,
                                DistanceMetric metric);

struct SetStats {
  std::size_t size = 0;
  // Pairwise statistics use the set's coverage metric; absent for singletons.
  std::optional<double> min_pairwise;
  std::optional<double> mean_pairwise;
  // Average speed of a member: path length from the agent origin through its
  // points, divided by its duration.
  double min_speed = 0.0;
  double max_speed = 0.0;
};

SetStats ComputeSetStats(const TrajectorySet& set);

// Largest distance from any candidate to its nearest member (the achieved
// coverage radius).
double CoverageRadius(const TrajectorySet& set,
                      std::span<const Trajectory> candidates,
                      DistanceMetric metric);

// JSON: {epsilon, metric, dt, n_points, source_count, trajectories}. Floats
// are written with 17 significant digits, so save/load is bit-stable.
std::string SetToJson(const TrajectorySet& set);
TrajectorySet SetFromJson(const std::string& text);
void SaveSet(const TrajectorySet& set, const std::filesystem::path& path);
TrajectorySet LoadSet(const std::filesystem::path& path);

}  // namespace trajcover

#endif  // TRAJCOVER_TRAJSET_H_
