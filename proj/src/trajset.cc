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

#include "trajcover/trajset.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "json.hpp"
#include "trajcover/contract.h"
#include "trajcover/json_util.h"
#include "trajcover/parallel.h"
#include "trajcover/rng.h"

namespace trajcover {
namespace {

void CheckHomogeneous(std::span<const Trajectory> candidates) {
  Require(!candidates.empty(), "candidate list is empty");
  const std::size_t n_points = candidates[0].size();
  const double dt = candidates[0].dt;
  for (const Trajectory& c : candidates) {
    ValidateTrajectory(c);
    Require(c.size() == n_points && c.dt == dt,
            "candidates must share point count and dt");
    Require(c.frame == Frame::kAgent, "candidates must be in the agent frame");
  }
}

void CheckShape(const TrajectorySet& set, const Trajectory& traj) {
  Require(traj.size() == set.points_per_trajectory(),
          "trajectory point count does not match the set");
  Require(traj.dt == set.dt(), "trajectory dt does not match the set");
  Require(traj.frame == Frame::kAgent,
          "trajectory must be in the agent frame to compare with the set");
}

// Applies the subsampling cap; keeps the original relative order.
std::vector<const Trajectory*> SelectPool(std::span<const Trajectory> candidates,
                                          const BuildOptions& options) {
  std::vector<const Trajectory*> pool;
  if (candidates.size() <= options.max_candidates) {
    pool.reserve(candidates.size());
    for (const Trajectory& c : candidates) pool.push_back(&c);
    return pool;
  }
  std::vector<std::size_t> order =
      SeededPermutation(candidates.size(), DeriveSeed("trajset-pool", options.seed));
  order.resize(options.max_candidates);
  std::sort(order.begin(), order.end());
  pool.reserve(order.size());
  for (std::size_t i : order) pool.push_back(&candidates[i]);
  return pool;
}

// cover[i] lists every j (including i) with metric(i, j) <= epsilon.
std::vector<std::vector<std::uint32_t>> Neighbourhoods(
    const std::vector<const Trajectory*>& pool, double epsilon,
    DistanceMetric metric) {
  const std::size_t n = pool.size();
  std::vector<std::vector<std::uint32_t>> upper(n);
  ParallelFor(n, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (TrajectoryDistance(metric, *pool[i], *pool[j]) <= epsilon) {
        upper[i].push_back(static_cast<std::uint32_t>(j));
      }
    }
  });
  std::vector<std::vector<std::uint32_t>> cover(n);
  for (std::size_t i = 0; i < n; ++i) cover[i].push_back(static_cast<std::uint32_t>(i));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::uint32_t j : upper[i]) {
      cover[i].push_back(j);
      cover[j].push_back(static_cast<std::uint32_t>(i));
    }
  }
  return cover;
}

std::vector<std::size_t> GreedyCover(
    const std::vector<std::vector<std::uint32_t>>& cover) {
  const std::size_t n = cover.size();
  std::vector<std::size_t> gain(n);
  for (std::size_t i = 0; i < n; ++i) gain[i] = cover[i].size();
  std::vector<bool> covered(n, false);
  std::vector<std::size_t> chosen;
  while (true) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (gain[i] > gain[best]) best = i;
    }
    if (gain[best] == 0) break;
    chosen.push_back(best);
    for (std::uint32_t j : cover[best]) {
      if (covered[j]) continue;
      covered[j] = true;
      for (std::uint32_t k : cover[j]) --gain[k];
    }
  }
  return chosen;
}

TrajectorySet Assemble(const std::vector<const Trajectory*>& pool,
                       const std::vector<std::size_t>& chosen, double epsilon,
                       DistanceMetric metric) {
  std::vector<Trajectory> members;
  members.reserve(chosen.size());
  for (std::size_t i : chosen) members.push_back(*pool[i]);
  return TrajectorySet(std::move(members), epsilon, metric, pool.size());
}

}  // namespace

TrajectorySet::TrajectorySet(std::vector<Trajectory> members, double epsilon,
                             DistanceMetric metric, std::size_t source_count)
    : members_(std::move(members)),
      epsilon_(epsilon),
      metric_(metric),
      source_count_(source_count) {
  Require(!members_.empty(), "trajectory set is empty");
  Require(epsilon_ > 0.0 && std::isfinite(epsilon_), "epsilon must be > 0");
  CheckHomogeneous(members_);
}

TrajectorySet BuildSet(std::span<const Trajectory> candidates, double epsilon,
                       DistanceMetric metric, const BuildOptions& options) {
  CheckHomogeneous(candidates);
  Require(epsilon > 0.0, "epsilon must be > 0");
  const std::vector<const Trajectory*> pool = SelectPool(candidates, options);
  return Assemble(pool, GreedyCover(Neighbourhoods(pool, epsilon, metric)),
                  epsilon, metric);
}

TrajectorySet BuildSetWithSize(std::span<const Trajectory> candidates,
                               std::size_t target_size, DistanceMetric metric,
                               const BuildOptions& options) {
  CheckHomogeneous(candidates);
  Require(target_size >= 1, "target set size must be >= 1");
  const std::vector<const Trajectory*> pool = SelectPool(candidates, options);
  const std::size_t n = pool.size();

  std::vector<double> dist(n * n, 0.0);
  ParallelFor(n, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      dist[i * n + j] = TrajectoryDistance(metric, *pool[i], *pool[j]);
    }
  });
  double max_pair = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      dist[j * n + i] = dist[i * n + j];
      max_pair = std::max(max_pair, dist[i * n + j]);
    }
  }
  auto cover_at = [&](double epsilon) {
    std::vector<std::vector<std::uint32_t>> cover(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j || dist[i * n + j] <= epsilon) {
          cover[i].push_back(static_cast<std::uint32_t>(j));
        }
      }
    }
    return GreedyCover(cover);
  };

  // Size is non-increasing in epsilon in practice; bisect on the boundary.
  double hi = std::max(max_pair, 1e-9);
  std::vector<std::size_t> best = cover_at(hi);
  double best_eps = hi;
  double lo = 0.0;
  for (int iter = 0; iter < 60 && hi - lo > 1e-6 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    std::vector<std::size_t> chosen = cover_at(mid);
    if (chosen.size() <= target_size) {
      hi = mid;
      best = std::move(chosen);
      best_eps = mid;
    } else {
      lo = mid;
    }
  }
  return Assemble(pool, best, best_eps, metric);
}

std::size_t ClosestMatch(const TrajectorySet& set,
                         const Trajectory& ground_truth) {
  CheckShape(set, ground_truth);
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < set.size(); ++k) {
    const double d = MeanL2(set[k], ground_truth);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

std::vector<double> DistancesTo(const TrajectorySet& set,
                                const Trajectory& ground_truth,
                                DistanceMetric metric) {
  CheckShape(set, ground_truth);
  std::vector<double> out(set.size());
  for (std::size_t k = 0; k < set.size(); ++k) {
    out[k] = TrajectoryDistance(metric, set[k], ground_truth);
  }
  return out;
}

SetStats ComputeSetStats(const TrajectorySet& set) {
  SetStats stats;
  stats.size = set.size();
  if (set.size() >= 2) {
    double min_d = std::numeric_limits<double>::infinity();
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < set.size(); ++i) {
      for (std::size_t j = i + 1; j < set.size(); ++j) {
        const double d = TrajectoryDistance(set.metric(), set[i], set[j]);
        min_d = std::min(min_d, d);
        sum += d;
        ++pairs;
      }
    }
    stats.min_pairwise = min_d;
    stats.mean_pairwise = sum / static_cast<double>(pairs);
  }
  stats.min_speed = std::numeric_limits<double>::infinity();
  stats.max_speed = 0.0;
  for (const Trajectory& t : set.members()) {
    double length = 0.0;
    Point2 prev{0.0, 0.0};
    for (const Point2& p : t.points) {
      length += Norm(p - prev);
      prev = p;
    }
    const double speed = length / (t.dt * static_cast<double>(t.size()));
    stats.min_speed = std::min(stats.min_speed, speed);
    stats.max_speed = std::max(stats.max_speed, speed);
  }
  return stats;
}

double CoverageRadius(const TrajectorySet& set,
                      std::span<const Trajectory> candidates,
                      DistanceMetric metric) {
  double radius = 0.0;
  for (const Trajectory& c : candidates) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const Trajectory& m : set.members()) {
      nearest = std::min(nearest, TrajectoryDistance(metric, c, m));
    }
    radius = std::max(radius, nearest);
  }
  return radius;
}

std::string SetToJson(const TrajectorySet& set) {
  std::string out;
  out += "{\"epsilon\": " + FormatDouble(set.epsilon());
  out += ", \"metric\": \"" + std::string(MetricName(set.metric())) + "\"";
  out += ", \"dt\": " + FormatDouble(set.dt());
  out += ", \"n_points\": " + std::to_string(set.points_per_trajectory());
  out += ", \"source_count\": " + std::to_string(set.source_count());
  out += ", \"trajectories\": [";
  for (std::size_t k = 0; k < set.size(); ++k) {
    out += k == 0 ? "\n  [" : ",\n  [";
    const auto& pts = set[k].points;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i > 0) out += ", ";
      out += "[" + FormatDouble(pts[i].x) + ", " + FormatDouble(pts[i].y) + "]";
    }
    out += "]";
  }
  out += "\n]}\n";
  return out;
}

TrajectorySet SetFromJson(const std::string& text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    const double dt = j.at("dt").get<double>();
    const std::size_t n_points = j.at("n_points").get<std::size_t>();
    std::vector<Trajectory> members;
    for (const auto& jt : j.at("trajectories")) {
      Trajectory t{.points = {}, .dt = dt, .frame = Frame::kAgent};
      for (const auto& jp : jt) {
        t.points.push_back({jp.at(0).get<double>(), jp.at(1).get<double>()});
      }
      if (t.size() != n_points) throw DataError("set member has wrong n_points");
      members.push_back(std::move(t));
    }
    const std::size_t source_count =
        j.value("source_count", static_cast<std::size_t>(members.size()));
    return TrajectorySet(std::move(members), j.at("epsilon").get<double>(),
                         ParseMetric(j.at("metric").get<std::string>()),
                         source_count);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("trajectory set: ") + e.what());
  } catch (const ContractViolation& e) {
    throw DataError(std::string("trajectory set: ") + e.what());
  }
}

void SaveSet(const TrajectorySet& set, const std::filesystem::path& path) {
  WriteTextFile(path, SetToJson(set));
}

TrajectorySet LoadSet(const std::filesystem::path& path) {
  return SetFromJson(ReadTextFile(path));
}

}  // namespace trajcover
