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

#ifndef TRAJCOVER_EXPERIMENT_H_
#define TRAJCOVER_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "trajcover/nnmodel.h"
#include "trajcover/synthdata.h"
#include "trajcover/training.h"
#include "trajcover/trajset.h"

namespace trajcover {

struct SweepAxes {
  std::vector<double> lambda = {0.0};
  std::vector<double> data_fraction = {1.0};
  std::vector<double> epsilon = {2.0};
  std::vector<int> set_size;  // replaces the epsilon axis when nonempty
  std::vector<LossVariant> loss_variant = {LossVariant::kCe};
  std::vector<bool> pretrain = {false};
  std::vector<HeadKind> head = {HeadKind::kClassification};
  std::vector<std::uint64_t> seeds = {0};  // replicates
};

struct ExperimentConfig {
  std::uint64_t seed = 0;  // master seed
  ScenarioSpec scenario;
  // Existing scene directory; when empty the corpus is synthesized.
  std::filesystem::path scenes_dir;
  double train_split = 0.8;  // remainder is validation
  DistanceMetric set_metric = DistanceMetric::kMaxL2;
  TrainConfig train;
  int pretrain_epochs = 10;
  ModelConfig model;
  int eval_k = 5;
  double miss_threshold = 2.0;
  int dac_ranks = 10;
  SweepAxes axes;
  std::filesystem::path output_dir = "sweep";
};

// Unknown keys and invalid values throw ContractViolation. Relative paths are
// resolved against `base`.
ExperimentConfig ParseExperimentConfig(const nlohmann::json& j,
                                       const std::filesystem::path& base);
void ValidateExperimentConfig(const ExperimentConfig& cfg);

struct CellSpec {
  std::string id;
  double lambda = 0.0;
  double data_fraction = 1.0;
  double epsilon = 0.0;  // used when set_size == 0
  int set_size = 0;
  LossVariant loss_variant = LossVariant::kCe;
  bool pretrain = false;
  HeadKind head = HeadKind::kClassification;
  std::uint64_t replicate = 0;
};

// Cross product of the axes in a fixed order.
std::vector<CellSpec> ExpandCells(const ExperimentConfig& cfg);

// Training and shuffling seed of a cell. It hashes the replicate part of the
// cell id only, so cells that differ in a treatment share initialization and
// batch order.
std::uint64_t CellSeed(const CellSpec& cell, std::uint64_t master_seed);

struct CellMetrics {
  std::size_t set_size = 0;
  std::size_t n_eval = 0;
  double minade1 = 0.0;
  double minade5 = 0.0;
  double minade10 = 0.0;
  double miss_rate = 0.0;
  double dac = 0.0;  // top eval_k
  double mean_mode_distance = 0.0;
  double residual_l1 = 0.0;  // regression heads only
  double residual_linf = 0.0;
  double final_loss = 0.0;
  std::vector<double> dac_by_rank;
};

// Runs cells against a shared corpus. Scenes, sets and rasterized datasets
// are built on first use and reused by later cells.
class SweepRunner {
 public:
  explicit SweepRunner(ExperimentConfig cfg);
  ~SweepRunner();

  const ExperimentConfig& config() const { return cfg_; }
  const std::vector<Scene>& train_scenes();
  const std::vector<Scene>& val_scenes();
  const TrajectorySet& SetFor(const CellSpec& cell);

  // Trains and evaluates one cell. The loss log is returned through `log`
  // when non-null.
  CellMetrics Run(const CellSpec& cell, std::vector<LossLogRow>* log = nullptr);

 private:
  struct SetData;
  void EnsureCorpus();
  SetData& DataFor(const CellSpec& cell);

  ExperimentConfig cfg_;
  bool corpus_ready_ = false;
  std::vector<Scene> train_;
  std::vector<Scene> val_;
  std::map<std::string, std::unique_ptr<SetData>> sets_;
};

// Runs every cell, writing cells/<id>/{metrics.csv,loss_log.csv,hash.txt},
// summary.csv, dac_by_rank.csv and the SVG plots under cfg.output_dir. Cells
// whose stored hash matches are loaded instead of rerun. Returns the number
// of failed cells.
int RunSweep(const ExperimentConfig& cfg);

// Plots derived from summary.csv and dac_by_rank.csv text.
std::map<std::string, std::string> PlotsFromCsv(const std::string& summary_csv,
                                                const std::string& dac_rank_csv);

}  // namespace trajcover

#endif  // TRAJCOVER_EXPERIMENT_H_
