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

#include "commands.h"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "trajcover/contract.h"
#include "trajcover/experiment.h"
#include "trajcover/image_io.h"
#include "trajcover/json_util.h"
#include "trajcover/metrics.h"
#include "trajcover/nnmodel.h"
#include "trajcover/parallel.h"
#include "trajcover/physics.h"
#include "trajcover/raster.h"
#include "trajcover/rng.h"
#include "trajcover/scene_io.h"
#include "trajcover/synthdata.h"
#include "trajcover/training.h"
#include "trajcover/trajset.h"

namespace trajcover {
namespace {

namespace fs = std::filesystem;

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitSweep = 4;

struct Globals {
  std::string out = ".";
  std::uint64_t seed = 0;

  fs::path Path(const std::string& p) const {
    const fs::path path(p);
    return path.is_absolute() ? path : fs::path(out) / path;
  }
};

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

// --- synth -----------------------------------------------------------------

struct SynthArgs {
  ScenarioSpec spec;
  std::string scenes = "scenes";
  std::vector<double> road_mix = {1.0, 1.0, 1.0};
};

int CmdSynth(const Globals& g, SynthArgs a) {
  Require(a.road_mix.size() == 3, "--road-mix takes straight,arc,t_intersection");
  a.spec.seed = g.seed;
  a.spec.road_mix = {a.road_mix[0], a.road_mix[1], a.road_mix[2]};
  const std::vector<Scene> scenes = Generate(a.spec);
  SaveScenes(g.Path(a.scenes), scenes);
  return 0;
}

// --- build-set -------------------------------------------------------------

struct BuildSetArgs {
  std::string scenes = "scenes";
  std::string output = "set.json";
  double epsilon = 2.0;
  int size = 0;
  std::string metric = "max_l2";
  std::size_t max_candidates = 60000;
};

int CmdBuildSet(const Globals& g, const BuildSetArgs& a) {
  const DistanceMetric metric = ParseMetric(a.metric);
  const std::vector<Scene> scenes = LoadScenes(g.Path(a.scenes));
  if (scenes.empty()) throw DataError("no scenes found");
  std::vector<Trajectory> futures;
  for (const Scene& s : scenes) futures.push_back(FutureInAgentFrame(s));
  BuildOptions options;
  options.max_candidates = a.max_candidates;
  options.seed = g.seed;
  const TrajectorySet set =
      a.size > 0 ? BuildSetWithSize(futures, static_cast<std::size_t>(a.size), metric,
                                    options)
                 : BuildSet(futures, a.epsilon, metric, options);
  SaveSet(set, g.Path(a.output));
  return 0;
}

// --- rasterize -------------------------------------------------------------

struct RasterizeArgs {
  std::string scenes = "scenes";
  std::string output = "rasters";
  std::string format = "ppm";
  bool map_only = false;
};

int CmdRasterize(const Globals& g, const RasterizeArgs& a) {
  Require(a.format == "ppm" || a.format == "png", "--format must be ppm or png");
  const std::vector<Scene> scenes = LoadScenes(g.Path(a.scenes));
  const fs::path dir = g.Path(a.output);
  fs::create_directories(dir);
  const RenderMode mode = a.map_only ? RenderMode::kMapOnly : RenderMode::kFull;
  ParallelFor(scenes.size(), [&](std::size_t i) {
    const RasterImage img = Render(scenes[i].context, mode);
    const fs::path path = dir / (scenes[i].scene_id + "." + a.format);
    if (a.format == "png") {
      WritePng(img, path);
    } else {
      WritePpm(img, path);
    }
  });
  return 0;
}

// --- baseline --------------------------------------------------------------

int CmdBaseline(const Globals& g, const std::string& scenes_dir,
                const std::string& output) {
  const std::vector<Scene> scenes = LoadScenes(g.Path(scenes_dir));
  std::vector<OracleResult> results(scenes.size());
  ParallelFor(scenes.size(), [&](std::size_t i) {
    const SceneContext& ctx = scenes[i].context;
    results[i] = PhysicsOracle(ctx.TargetKinematics(), scenes[i].future,
                               ctx.prediction_horizon, ctx.freq);
  });
  std::string csv = "scene_id,best_model,ade\n";
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    csv += scenes[i].scene_id + "," + std::string(MotionModelName(results[i].best_model)) +
           "," + FormatDouble(results[i].ade) + "\n";
  }
  WriteTextFile(g.Path(output), csv);
  return 0;
}

// --- pretrain / train ------------------------------------------------------

struct TrainArgs {
  std::string scenes = "scenes";
  std::string set;
  std::string init;
  std::string output = "model.json";
  std::string log = "loss_log.csv";
  std::string head = "classification";
  std::string loss = "ce";
  int grid = 25;
  std::vector<int> hidden = {256, 256};
  TrainConfig train;
};

TrajectoryModel InitialModel(const Globals& g, const TrainArgs& a) {
  if (!a.init.empty()) return LoadModel(g.Path(a.init));
  Require(!a.set.empty(), "--set or --init is required");
  ModelConfig mc;
  mc.grid_rows = a.grid;
  mc.grid_cols = a.grid;
  mc.hidden_sizes = a.hidden;
  mc.head = ParseHeadKind(a.head);
  mc.seed = DeriveSeed("model", g.seed);
  return TrajectoryModel(mc, LoadSet(g.Path(a.set)));
}

int CmdTrain(const Globals& g, TrainArgs a, bool pretrain) {
  a.train.loss_variant = ParseLossVariant(a.loss);
  a.train.seed = DeriveSeed(pretrain ? "pretrain" : "train", g.seed);
  ValidateTrainConfig(a.train);
  TrajectoryModel model = InitialModel(g, a);
  const std::vector<Scene> scenes = LoadScenes(g.Path(a.scenes));
  if (scenes.empty()) throw DataError("no scenes found");
  const Dataset data =
      BuildDataset(scenes, model.anchors(), model.config(),
                   pretrain ? RenderMode::kMapOnly : RenderMode::kFull);
  const TrainResult result =
      pretrain ? PretrainMapOnly(model, data, a.train) : Train(model, data, a.train);
  SaveModel(model, g.Path(a.output));
  WriteTextFile(g.Path(a.log), LossLogCsv(result.log));
  return 0;
}

// --- eval ------------------------------------------------------------------

struct EvalArgs {
  std::string scenes = "scenes";
  std::string model;
  bool physics = false;
  std::string output = "eval.csv";
  int k = 5;
  double miss_threshold = 2.0;
};

int CmdEval(const Globals& g, const EvalArgs& a) {
  Require(a.physics != !a.model.empty(), "exactly one of --model or --physics");
  Require(a.k >= 1, "--k must be >= 1");
  const std::vector<Scene> scenes = LoadScenes(g.Path(a.scenes));
  if (scenes.empty()) throw DataError("no scenes found");
  std::optional<TrajectoryModel> model;
  if (!a.physics) model = LoadModel(g.Path(a.model));

  const std::size_t k = static_cast<std::size_t>(a.k);
  std::vector<PredictionSet> preds(scenes.size());
  ParallelFor(scenes.size(), [&](std::size_t i) {
    const SceneContext& ctx = scenes[i].context;
    if (model) {
      preds[i] = PredictTopK(*model, ctx, std::min<std::size_t>(
                                              std::max<std::size_t>(k, 10),
                                              model->num_modes()));
    } else {
      const double p = 1.0 / static_cast<double>(kAllMotionModels.size());
      for (MotionModel m : kAllMotionModels) {
        preds[i].entries.push_back(
            {Rollout(ctx.TargetKinematics(), m, ctx.prediction_horizon, ctx.freq), p});
      }
    }
  });

  const std::string miss_col = "miss_" + std::to_string(a.k) + "_" + Num(a.miss_threshold);
  std::string csv = "scene_id,minade1,minade5,minade10," + miss_col + ",dac,mean_mode_dist\n";
  double sums[6] = {0, 0, 0, 0, 0, 0};
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    const PredictionSet& p = preds[i];
    const Trajectory& gt = scenes[i].future;
    auto top = [&p](std::size_t n) { return std::min(n, p.size()); };
    PredictionSet topk;
    topk.entries.assign(p.entries.begin(), p.entries.begin() + top(k));
    const double v[6] = {
        MinAde(p, gt, 1),
        MinAde(p, gt, top(5)),
        MinAde(p, gt, top(10)),
        static_cast<double>(MissRateSingle(p, gt, top(k), a.miss_threshold)),
        Dac(topk, scenes[i].context.map.drivable),
        top(k) >= 2 ? MeanModeDistance(p, top(k)) : 0.0};
    csv += scenes[i].scene_id;
    for (int c = 0; c < 6; ++c) {
      csv += "," + FormatDouble(v[c]);
      sums[c] += v[c];
    }
    csv += "\n";
  }
  csv += "mean";
  for (double s : sums) csv += "," + FormatDouble(s / static_cast<double>(scenes.size()));
  csv += "\n";
  WriteTextFile(g.Path(a.output), csv);
  return 0;
}

// --- sweep -----------------------------------------------------------------

int CmdSweep(const Globals& g, const std::string& config_path) {
  const fs::path path = g.Path(config_path);
  nlohmann::json j;
  try {
    j = ReadJsonFile(path);
  } catch (const DataError& e) {
    throw ContractViolation(e.what());
  }
  if (!j.contains("seed")) j["seed"] = g.seed;
  const ExperimentConfig cfg = ParseExperimentConfig(j, fs::path(g.out));
  const int failures = RunSweep(cfg);
  if (failures > 0) {
    std::cerr << failures << " sweep cell(s) failed; see summary.csv\n";
    return kExitSweep;
  }
  return 0;
}

}  // namespace

int RunCli(int argc, char** argv) {
  CLI::App app{"Trajectory-set prediction toolkit", "trajcover"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--out", g.out, "Directory all relative paths resolve against");
  app.add_option("--seed", g.seed, "Master seed");

  SynthArgs synth;
  CLI::App* c_synth = app.add_subcommand("synth", "Generate synthetic scenes");
  c_synth->add_option("--scenes", synth.scenes, "Output scene directory");
  c_synth->add_option("--n-scenes", synth.spec.n_scenes);
  c_synth->add_option("--lanes", synth.spec.lanes);
  c_synth->add_option("--lane-width", synth.spec.lane_width);
  c_synth->add_option("--speed-min", synth.spec.speed_min);
  c_synth->add_option("--speed-max", synth.spec.speed_max);
  c_synth->add_option("--history", synth.spec.history_window, "Seconds");
  c_synth->add_option("--horizon", synth.spec.prediction_horizon, "Seconds");
  c_synth->add_option("--freq", synth.spec.freq, "Hz");
  c_synth->add_option("--lateral-noise", synth.spec.lateral_noise, "Meters");
  c_synth->add_option("--max-distractors", synth.spec.max_distractors);
  c_synth->add_option("--road-mix", synth.road_mix, "Weights: straight arc t_intersection")
      ->expected(3);

  BuildSetArgs bset;
  CLI::App* c_set = app.add_subcommand("build-set", "Build a trajectory set");
  c_set->add_option("--scenes", bset.scenes);
  c_set->add_option("--output", bset.output);
  c_set->add_option("--epsilon", bset.epsilon, "Coverage radius (m)");
  c_set->add_option("--size", bset.size, "Target set size (overrides --epsilon)");
  c_set->add_option("--metric", bset.metric, "max_l2 or mean_l2");
  c_set->add_option("--max-candidates", bset.max_candidates);

  RasterizeArgs rast;
  CLI::App* c_rast = app.add_subcommand("rasterize", "Render BEV rasters");
  c_rast->add_option("--scenes", rast.scenes);
  c_rast->add_option("--output", rast.output);
  c_rast->add_option("--format", rast.format, "ppm or png");
  c_rast->add_flag("--map-only", rast.map_only);

  std::string base_scenes = "scenes";
  std::string base_output = "baseline.csv";
  CLI::App* c_base = app.add_subcommand("baseline", "Physics oracle per scene");
  c_base->add_option("--scenes", base_scenes);
  c_base->add_option("--output", base_output);

  auto add_train_options = [](CLI::App* c, TrainArgs& t) {
    c->add_option("--scenes", t.scenes);
    c->add_option("--set", t.set, "Trajectory set file");
    c->add_option("--init", t.init, "Checkpoint to continue from");
    c->add_option("--output", t.output, "Checkpoint path");
    c->add_option("--log", t.log, "Loss log CSV");
    c->add_option("--head", t.head, "classification or ordinal_regression");
    c->add_option("--grid", t.grid, "Feature grid size");
    c->add_option("--hidden", t.hidden, "Hidden layer widths");
    c->add_option("--epochs", t.train.epochs);
    c->add_option("--batch-size", t.train.batch_size);
    c->add_option("--lr0", t.train.lr0);
    c->add_option("--lr-decay", t.train.lr_decay);
    c->add_option("--clip-norm", t.train.clip_norm, "Global gradient norm cap (0 = off)");
  };
  TrainArgs pre;
  CLI::App* c_pre = app.add_subcommand("pretrain", "Map-only pretraining");
  add_train_options(c_pre, pre);

  TrainArgs train;
  CLI::App* c_train = app.add_subcommand("train", "Train a model");
  add_train_options(c_train, train);
  c_train->add_option("--loss", train.loss, "ce, wce_max, wce_mean or avoid_nearby");
  c_train->add_option("--lambda", train.train.lambda_offroad, "Off-road loss weight");
  c_train->add_option("--threshold", train.train.threshold);
  c_train->add_option("--exclusion", train.train.avoid_nearby_exclusion);
  c_train->add_option("--data-fraction", train.train.data_fraction);

  EvalArgs ev;
  CLI::App* c_eval = app.add_subcommand("eval", "Evaluate predictions");
  c_eval->add_option("--scenes", ev.scenes);
  c_eval->add_option("--model", ev.model, "Checkpoint");
  c_eval->add_flag("--physics", ev.physics, "Use the four physics rollouts");
  c_eval->add_option("--output", ev.output);
  c_eval->add_option("--k", ev.k);
  c_eval->add_option("--miss-threshold", ev.miss_threshold);

  std::string sweep_config;
  CLI::App* c_sweep = app.add_subcommand("sweep", "Run an experiment grid");
  c_sweep->add_option("--config", sweep_config, "Experiment config JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e);
      return 0;
    }
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitConfig;
  }

  try {
    fs::create_directories(g.out);
    if (*c_synth) return CmdSynth(g, synth);
    if (*c_set) return CmdBuildSet(g, bset);
    if (*c_rast) return CmdRasterize(g, rast);
    if (*c_base) return CmdBaseline(g, base_scenes, base_output);
    if (*c_pre) return CmdTrain(g, pre, /*pretrain=*/true);
    if (*c_train) return CmdTrain(g, train, /*pretrain=*/false);
    if (*c_eval) return CmdEval(g, ev);
    if (*c_sweep) return CmdSweep(g, sweep_config);
  } catch (const ContractViolation& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitConfig;
}

}  // namespace trajcover
