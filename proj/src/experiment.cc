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

#include "trajcover/experiment.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <utility>

#include "trajcover/contract.h"
#include "trajcover/json_util.h"
#include "trajcover/parallel.h"
#include "trajcover/rng.h"
#include "trajcover/scene_io.h"
#include "trajcover/svg.h"

namespace trajcover {

using nlohmann::json;

namespace {

std::string Short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void CheckKeys(const json& j, std::initializer_list<const char*> allowed,
               const std::string& where) {
  Require(j.is_object(), where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    Require(known, "unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void Read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ContractViolation(std::string("bad value for '") + key + "': " + e.what());
  }
}

template <typename T, typename F>
void ReadList(const json& j, const char* key, std::vector<T>& out, F convert) {
  if (!j.contains(key)) return;
  const json& list = j.at(key);
  Require(list.is_array(), std::string("'") + key + "' must be a list");
  out.clear();
  try {
    for (const json& v : list) out.push_back(convert(v));
  } catch (const json::exception& e) {
    throw ContractViolation(std::string("bad value in '") + key + "': " + e.what());
  }
}

std::filesystem::path Resolve(const std::filesystem::path& base,
                              const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

// Everything that affects a cell's result other than its axis values.
json SharedConfigJson(const ExperimentConfig& cfg) {
  const ScenarioSpec& s = cfg.scenario;
  const TrainConfig& t = cfg.train;
  json hidden = cfg.model.hidden_sizes;
  return {
      {"seed", cfg.seed},
      {"scenario",
       {{"seed", s.seed}, {"n_scenes", s.n_scenes},
        {"road_mix", {s.road_mix.straight, s.road_mix.arc, s.road_mix.t_intersection}},
        {"lane_width", s.lane_width}, {"lanes", s.lanes},
        {"speed_min", s.speed_min}, {"speed_max", s.speed_max},
        {"history_window", s.history_window},
        {"prediction_horizon", s.prediction_horizon}, {"freq", s.freq},
        {"lateral_noise", s.lateral_noise}, {"max_distractors", s.max_distractors},
        {"vehicle_length", s.vehicle_length}, {"vehicle_width", s.vehicle_width}}},
      {"scenes_dir", cfg.scenes_dir.string()},
      {"train_split", cfg.train_split},
      {"set_metric", std::string(MetricName(cfg.set_metric))},
      {"train",
       {{"epochs", t.epochs}, {"batch_size", t.batch_size}, {"lr0", t.lr0},
        {"lr_decay", t.lr_decay}, {"threshold", t.threshold},
        {"avoid_nearby_exclusion", t.avoid_nearby_exclusion},
        {"clip_norm", t.clip_norm}}},
      {"pretrain_epochs", cfg.pretrain_epochs},
      {"model", {{"grid_rows", cfg.model.grid_rows},
                 {"grid_cols", cfg.model.grid_cols},
                 {"hidden_sizes", hidden}}},
      {"eval", {{"k", cfg.eval_k}, {"miss_threshold", cfg.miss_threshold},
                {"dac_ranks", cfg.dac_ranks}}},
  };
}

std::string Fnv1aHex(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string SetKey(const CellSpec& cell) {
  return cell.set_size > 0 ? "size=" + std::to_string(cell.set_size)
                           : "eps=" + Short(cell.epsilon);
}

PredictionSet Truncate(const PredictionSet& preds, std::size_t k) {
  PredictionSet out;
  out.entries.assign(preds.entries.begin(),
                     preds.entries.begin() + std::min(k, preds.entries.size()));
  return out;
}

std::string MetricsCsv(const CellMetrics& m) {
  std::string out = "key,value\n";
  auto row = [&out](const std::string& key, double v) {
    out += key + "," + FormatDouble(v) + "\n";
  };
  row("set_size", static_cast<double>(m.set_size));
  row("n_eval", static_cast<double>(m.n_eval));
  row("minade1", m.minade1);
  row("minade5", m.minade5);
  row("minade10", m.minade10);
  row("miss_rate", m.miss_rate);
  row("dac", m.dac);
  row("mean_mode_distance", m.mean_mode_distance);
  row("residual_l1", m.residual_l1);
  row("residual_linf", m.residual_linf);
  row("final_loss", m.final_loss);
  for (std::size_t r = 0; r < m.dac_by_rank.size(); ++r) {
    row("dac_rank_" + std::to_string(r + 1), m.dac_by_rank[r]);
  }
  return out;
}

CellMetrics MetricsFromCsv(const std::string& text) {
  CellMetrics m;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  Require(line == "key,value", "metrics file has an unexpected header");
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    Require(comma != std::string::npos, "malformed metrics line");
    const std::string key = line.substr(0, comma);
    const double v = std::stod(line.substr(comma + 1));
    if (key == "set_size") m.set_size = static_cast<std::size_t>(v);
    else if (key == "n_eval") m.n_eval = static_cast<std::size_t>(v);
    else if (key == "minade1") m.minade1 = v;
    else if (key == "minade5") m.minade5 = v;
    else if (key == "minade10") m.minade10 = v;
    else if (key == "miss_rate") m.miss_rate = v;
    else if (key == "dac") m.dac = v;
    else if (key == "mean_mode_distance") m.mean_mode_distance = v;
    else if (key == "residual_l1") m.residual_l1 = v;
    else if (key == "residual_linf") m.residual_linf = v;
    else if (key == "final_loss") m.final_loss = v;
    else if (key.starts_with("dac_rank_")) m.dac_by_rank.push_back(v);
  }
  return m;
}

std::vector<std::vector<std::string>> ParseCsv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    rows.push_back(std::move(fields));
  }
  return rows;
}

std::string Sanitize(std::string text) {
  for (char& c : text) {
    if (c == ',' || c == '\n' || c == '\r') c = ' ';
  }
  return text;
}

}  // namespace

ExperimentConfig ParseExperimentConfig(const json& j, const std::filesystem::path& base) {
  ExperimentConfig cfg;
  CheckKeys(j, {"seed", "scenario", "scenes_dir", "train_split", "set_metric", "train",
                "pretrain_epochs", "model", "eval", "axes", "output_dir"},
            "experiment config");
  Read(j, "seed", cfg.seed);
  cfg.scenario.seed = DeriveSeed("corpus", cfg.seed);
  if (j.contains("scenario")) {
    const json& s = j["scenario"];
    CheckKeys(s, {"seed", "n_scenes", "road_mix", "lane_width", "lanes", "speed_min",
                  "speed_max", "history_window", "prediction_horizon", "freq",
                  "lateral_noise", "max_distractors", "vehicle_length", "vehicle_width"},
              "scenario");
    ScenarioSpec& sc = cfg.scenario;
    Read(s, "seed", sc.seed);
    Read(s, "n_scenes", sc.n_scenes);
    if (s.contains("road_mix")) {
      const json& m = s["road_mix"];
      CheckKeys(m, {"straight", "arc", "t_intersection"}, "road_mix");
      Read(m, "straight", sc.road_mix.straight);
      Read(m, "arc", sc.road_mix.arc);
      Read(m, "t_intersection", sc.road_mix.t_intersection);
    }
    Read(s, "lane_width", sc.lane_width);
    Read(s, "lanes", sc.lanes);
    Read(s, "speed_min", sc.speed_min);
    Read(s, "speed_max", sc.speed_max);
    Read(s, "history_window", sc.history_window);
    Read(s, "prediction_horizon", sc.prediction_horizon);
    Read(s, "freq", sc.freq);
    Read(s, "lateral_noise", sc.lateral_noise);
    Read(s, "max_distractors", sc.max_distractors);
    Read(s, "vehicle_length", sc.vehicle_length);
    Read(s, "vehicle_width", sc.vehicle_width);
  }
  if (j.contains("scenes_dir")) {
    cfg.scenes_dir = Resolve(base, j["scenes_dir"].get<std::string>());
  }
  Read(j, "train_split", cfg.train_split);
  if (j.contains("set_metric")) {
    cfg.set_metric = ParseMetric(j["set_metric"].get<std::string>());
  }
  if (j.contains("train")) {
    const json& t = j["train"];
    CheckKeys(t, {"epochs", "batch_size", "lr0", "lr_decay", "threshold",
                  "avoid_nearby_exclusion", "clip_norm"},
              "train");
    Read(t, "epochs", cfg.train.epochs);
    Read(t, "batch_size", cfg.train.batch_size);
    Read(t, "lr0", cfg.train.lr0);
    Read(t, "lr_decay", cfg.train.lr_decay);
    Read(t, "threshold", cfg.train.threshold);
    Read(t, "avoid_nearby_exclusion", cfg.train.avoid_nearby_exclusion);
    Read(t, "clip_norm", cfg.train.clip_norm);
  }
  Read(j, "pretrain_epochs", cfg.pretrain_epochs);
  if (j.contains("model")) {
    const json& m = j["model"];
    CheckKeys(m, {"grid_rows", "grid_cols", "hidden_sizes"}, "model");
    Read(m, "grid_rows", cfg.model.grid_rows);
    Read(m, "grid_cols", cfg.model.grid_cols);
    Read(m, "hidden_sizes", cfg.model.hidden_sizes);
  }
  if (j.contains("eval")) {
    const json& e = j["eval"];
    CheckKeys(e, {"k", "miss_threshold", "dac_ranks"}, "eval");
    Read(e, "k", cfg.eval_k);
    Read(e, "miss_threshold", cfg.miss_threshold);
    Read(e, "dac_ranks", cfg.dac_ranks);
  }
  if (j.contains("axes")) {
    const json& a = j["axes"];
    CheckKeys(a, {"lambda", "data_fraction", "epsilon", "set_size", "loss_variant",
                  "pretrain", "head", "seeds"},
              "axes");
    SweepAxes& ax = cfg.axes;
    ReadList(a, "lambda", ax.lambda, [](const json& v) { return v.get<double>(); });
    ReadList(a, "data_fraction", ax.data_fraction,
             [](const json& v) { return v.get<double>(); });
    ReadList(a, "epsilon", ax.epsilon, [](const json& v) { return v.get<double>(); });
    ReadList(a, "set_size", ax.set_size, [](const json& v) { return v.get<int>(); });
    ReadList(a, "loss_variant", ax.loss_variant,
             [](const json& v) { return ParseLossVariant(v.get<std::string>()); });
    ReadList(a, "pretrain", ax.pretrain, [](const json& v) { return v.get<bool>(); });
    ReadList(a, "head", ax.head,
             [](const json& v) { return ParseHeadKind(v.get<std::string>()); });
    ReadList(a, "seeds", ax.seeds,
             [](const json& v) { return v.get<std::uint64_t>(); });
  }
  cfg.output_dir = Resolve(base, j.value("output_dir", std::string("sweep")));
  ValidateExperimentConfig(cfg);
  return cfg;
}

void ValidateExperimentConfig(const ExperimentConfig& cfg) {
  const SweepAxes& a = cfg.axes;
  Require(!a.lambda.empty() && !a.data_fraction.empty() && !a.loss_variant.empty() &&
              !a.pretrain.empty() && !a.head.empty() && !a.seeds.empty() &&
              (!a.epsilon.empty() || !a.set_size.empty()),
          "sweep axes must be nonempty");
  for (double l : a.lambda) Require(l >= 0.0, "lambda must be >= 0");
  for (double f : a.data_fraction) {
    Require(f > 0.0 && f <= 1.0, "data fraction must be in (0, 1]");
  }
  for (double e : a.epsilon) Require(e > 0.0, "epsilon must be > 0");
  for (int s : a.set_size) Require(s >= 1, "set size must be >= 1");
  Require(cfg.train_split > 0.0 && cfg.train_split < 1.0,
          "train_split must be in (0, 1)");
  Require(cfg.pretrain_epochs >= 0, "pretrain_epochs must be >= 0");
  Require(cfg.eval_k >= 1 && cfg.dac_ranks >= 1, "eval k and dac_ranks must be >= 1");
  Require(cfg.miss_threshold > 0.0, "miss threshold must be > 0");
  if (cfg.scenes_dir.empty()) {
    ValidateScenarioSpec(cfg.scenario);
  } else {
    Require(std::filesystem::is_directory(cfg.scenes_dir),
            "scenes_dir does not exist: " + cfg.scenes_dir.string());
  }
  TrainConfig t = cfg.train;
  ValidateTrainConfig(t);
}

std::vector<CellSpec> ExpandCells(const ExperimentConfig& cfg) {
  const SweepAxes& a = cfg.axes;
  std::vector<std::pair<double, int>> anchors;
  if (!a.set_size.empty()) {
    for (int s : a.set_size) anchors.emplace_back(0.0, s);
  } else {
    for (double e : a.epsilon) anchors.emplace_back(e, 0);
  }
  std::vector<CellSpec> cells;
  for (HeadKind head : a.head)
    for (LossVariant variant : a.loss_variant)
      for (const auto& [eps, size] : anchors)
        for (double lambda : a.lambda)
          for (double fraction : a.data_fraction)
            for (bool pretrain : a.pretrain)
              for (std::uint64_t rep : a.seeds) {
                CellSpec c;
                c.head = head;
                c.loss_variant = variant;
                c.epsilon = eps;
                c.set_size = size;
                c.lambda = lambda;
                c.data_fraction = fraction;
                c.pretrain = pretrain;
                c.replicate = rep;
                c.id = std::string(HeadKindName(head)) + "_" +
                       std::string(LossVariantName(variant)) + "_" + SetKey(c) +
                       "_lambda=" + Short(lambda) + "_frac=" + Short(fraction) +
                       "_pre=" + (pretrain ? "1" : "0") + "_rep=" + std::to_string(rep);
                cells.push_back(std::move(c));
              }
  return cells;
}

std::uint64_t CellSeed(const CellSpec& cell, std::uint64_t master_seed) {
  return DeriveSeed("rep=" + std::to_string(cell.replicate), master_seed);
}

struct SweepRunner::SetData {
  TrajectorySet set;
  Dataset train;
  Dataset val;
  std::optional<Dataset> map_only;
};

SweepRunner::SweepRunner(ExperimentConfig cfg) : cfg_(std::move(cfg)) {
  ValidateExperimentConfig(cfg_);
}

SweepRunner::~SweepRunner() = default;

void SweepRunner::EnsureCorpus() {
  if (corpus_ready_) return;
  const std::vector<Scene> scenes =
      cfg_.scenes_dir.empty() ? Generate(cfg_.scenario) : LoadScenes(cfg_.scenes_dir);
  SceneSplit split = Split(scenes, cfg_.train_split, 1.0 - cfg_.train_split,
                           DeriveSeed("split", cfg_.seed));
  if (split.train.empty() || split.val.empty()) {
    throw DataError("corpus too small for a train/validation split");
  }
  train_ = std::move(split.train);
  val_ = std::move(split.val);
  corpus_ready_ = true;
}

const std::vector<Scene>& SweepRunner::train_scenes() {
  EnsureCorpus();
  return train_;
}

const std::vector<Scene>& SweepRunner::val_scenes() {
  EnsureCorpus();
  return val_;
}

SweepRunner::SetData& SweepRunner::DataFor(const CellSpec& cell) {
  EnsureCorpus();
  const std::string key = SetKey(cell);
  auto it = sets_.find(key);
  if (it != sets_.end()) return *it->second;

  std::vector<Trajectory> futures;
  futures.reserve(train_.size());
  for (const Scene& s : train_) futures.push_back(FutureInAgentFrame(s));
  BuildOptions options;
  options.seed = DeriveSeed("set", cfg_.seed);
  TrajectorySet set =
      cell.set_size > 0
          ? BuildSetWithSize(futures, static_cast<std::size_t>(cell.set_size),
                             cfg_.set_metric, options)
          : BuildSet(futures, cell.epsilon, cfg_.set_metric, options);
  auto data = std::make_unique<SetData>(SetData{
      .set = set,
      .train = BuildDataset(train_, set, cfg_.model, RenderMode::kFull),
      .val = BuildDataset(val_, set, cfg_.model, RenderMode::kFull),
      .map_only = std::nullopt});
  return *sets_.emplace(key, std::move(data)).first->second;
}

const TrajectorySet& SweepRunner::SetFor(const CellSpec& cell) {
  return DataFor(cell).set;
}

CellMetrics SweepRunner::Run(const CellSpec& cell, std::vector<LossLogRow>* log) {
  SetData& data = DataFor(cell);
  const std::uint64_t seed = CellSeed(cell, cfg_.seed);

  ModelConfig mc = cfg_.model;
  mc.head = cell.head;
  mc.seed = seed;
  TrajectoryModel model(mc, data.set);

  TrainConfig tc = cfg_.train;
  tc.lambda_offroad = cell.lambda;
  tc.loss_variant = cell.loss_variant;
  tc.data_fraction = cell.data_fraction;
  tc.seed = seed;

  std::vector<LossLogRow> rows;
  if (cell.pretrain && cfg_.pretrain_epochs > 0) {
    if (!data.map_only) {
      data.map_only = BuildDataset(train_, data.set, cfg_.model, RenderMode::kMapOnly);
    }
    TrainConfig pc = tc;
    pc.epochs = cfg_.pretrain_epochs;
    pc.data_fraction = 1.0;
    pc.seed = DeriveSeed("pretrain", seed);
    TrainResult pre = PretrainMapOnly(model, *data.map_only, pc);
    for (LossLogRow& r : pre.log) r.epoch -= cfg_.pretrain_epochs;
    rows = std::move(pre.log);
  }
  TrainResult result = Train(model, data.train, tc);
  rows.insert(rows.end(), result.log.begin(), result.log.end());

  const std::size_t n = data.val.size();
  const std::size_t k_eval = static_cast<std::size_t>(cfg_.eval_k);
  const std::size_t modes = data.set.size();
  const std::size_t k_pred = std::min(
      modes, std::max<std::size_t>(
                 {10, k_eval, static_cast<std::size_t>(cfg_.dac_ranks)}));
  const std::size_t ranks =
      std::min(modes, static_cast<std::size_t>(cfg_.dac_ranks));
  auto top = [modes](std::size_t k) { return std::min(k, modes); };
  std::vector<PredictionSet> preds(n);
  ParallelFor(n, [&](std::size_t i) {
    const Example& ex = data.val.examples[i];
    preds[i] = PredictFromInput(model, ex.input, ex.pose, k_pred);
  });

  CellMetrics m;
  m.set_size = data.set.size();
  m.n_eval = n;
  std::vector<PolygonSet> areas;
  for (std::size_t i = 0; i < n; ++i) {
    const Trajectory& gt = val_[i].future;
    m.minade1 += MinAde(preds[i], gt, 1);
    m.minade5 += MinAde(preds[i], gt, top(5));
    m.minade10 += MinAde(preds[i], gt, top(10));
    m.miss_rate += MissRateSingle(preds[i], gt, top(k_eval), cfg_.miss_threshold);
    m.dac += Dac(Truncate(preds[i], k_eval), val_[i].context.map.drivable);
    if (top(k_eval) >= 2) {
      m.mean_mode_distance += MeanModeDistance(preds[i], top(k_eval));
    }
    areas.push_back(val_[i].context.map.drivable);
  }
  const double inv = 1.0 / static_cast<double>(n);
  m.minade1 *= inv;
  m.minade5 *= inv;
  m.minade10 *= inv;
  m.miss_rate *= inv;
  m.dac *= inv;
  m.mean_mode_distance *= inv;
  std::vector<PredictionSet> ranked;
  for (const PredictionSet& p : preds) {
    ranked.push_back(Truncate(p, ranks));
  }
  m.dac_by_rank = DacByRank(ranked, areas, ranks);
  if (cell.head == HeadKind::kOrdinalRegression) {
    const ResidualNorms norms = ResidualStats(model, data.val);
    m.residual_l1 = norms.mean_l1;
    m.residual_linf = norms.mean_linf;
  }
  m.final_loss = rows.empty() ? 0.0 : rows.back().loss;
  if (log != nullptr) *log = std::move(rows);
  return m;
}

int RunSweep(const ExperimentConfig& cfg) {
  const std::vector<CellSpec> cells = ExpandCells(cfg);
  SweepRunner runner(cfg);
  const std::string shared = SharedConfigJson(cfg).dump();
  const std::filesystem::path out = cfg.output_dir;
  std::filesystem::create_directories(out / "cells");

  std::string summary =
      "cell_id,replicate,head,loss_variant,lambda,data_fraction,epsilon,set_size,"
      "pretrain,status,minade1,minade5,minade10,miss_rate,dac,mean_mode_distance,"
      "residual_l1,residual_linf,final_loss,error\n";
  std::string rank_csv = "cell_id,lambda,rank,dac\n";
  int failures = 0;
  for (const CellSpec& cell : cells) {
    const std::filesystem::path dir = out / "cells" / cell.id;
    const std::string hash = Fnv1aHex(shared + "|" + cell.id);
    std::optional<CellMetrics> metrics;
    std::string error;
    if (std::filesystem::exists(dir / "hash.txt") &&
        std::filesystem::exists(dir / "metrics.csv") &&
        ReadTextFile(dir / "hash.txt") == hash + "\n") {
      try {
        metrics = MetricsFromCsv(ReadTextFile(dir / "metrics.csv"));
      } catch (const std::exception&) {
        metrics.reset();
      }
    }
    if (!metrics) {
      try {
        std::vector<LossLogRow> log;
        metrics = runner.Run(cell, &log);
        WriteTextFile(dir / "metrics.csv", MetricsCsv(*metrics));
        WriteTextFile(dir / "loss_log.csv", LossLogCsv(log));
        WriteTextFile(dir / "hash.txt", hash + "\n");
      } catch (const std::exception& e) {
        error = Sanitize(e.what());
        std::filesystem::remove(dir / "hash.txt");
      }
    }
    std::string row = cell.id + "," + std::to_string(cell.replicate) + "," +
                      std::string(HeadKindName(cell.head)) + "," +
                      std::string(LossVariantName(cell.loss_variant)) + "," +
                      Short(cell.lambda) + "," + Short(cell.data_fraction) + "," +
                      Short(cell.epsilon) + ",";
    if (metrics) {
      const CellMetrics& m = *metrics;
      row += std::to_string(m.set_size) + "," + (cell.pretrain ? "1" : "0") + ",ok," +
             Short(m.minade1) + "," + Short(m.minade5) + "," + Short(m.minade10) + "," +
             Short(m.miss_rate) + "," + Short(m.dac) + "," + Short(m.mean_mode_distance) +
             "," + Short(m.residual_l1) + "," + Short(m.residual_linf) + "," +
             Short(m.final_loss) + ",\n";
      for (std::size_t r = 0; r < m.dac_by_rank.size(); ++r) {
        rank_csv += cell.id + "," + Short(cell.lambda) + "," + std::to_string(r + 1) +
                    "," + Short(m.dac_by_rank[r]) + "\n";
      }
    } else {
      ++failures;
      row += std::string(std::to_string(cell.set_size)) + "," +
             (cell.pretrain ? "1" : "0") + ",failed,,,,,,,,,," + error + "\n";
    }
    summary += row;
  }
  WriteTextFile(out / "summary.csv", summary);
  WriteTextFile(out / "dac_by_rank.csv", rank_csv);
  for (const auto& [name, svg] : PlotsFromCsv(summary, rank_csv)) {
    WriteTextFile(out / name, svg);
  }
  return failures;
}

std::map<std::string, std::string> PlotsFromCsv(const std::string& summary_csv,
                                                const std::string& dac_rank_csv) {
  const auto rows = ParseCsv(summary_csv);
  Require(!rows.empty(), "summary CSV is empty");
  const std::vector<std::string>& header = rows.front();
  auto col = [&header](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    Require(it != header.end(), "summary CSV lacks column " + name);
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t c_status = col("status");
  std::vector<const std::vector<std::string>*> ok;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() > c_status && rows[i][c_status] == "ok") ok.push_back(&rows[i]);
  }

  // Mean of `y` per (series, x), both ordered by first appearance of the
  // series and numerically in x.
  using Accum = std::map<double, std::pair<double, int>>;
  auto grouped = [&](std::size_t c_series, std::size_t c_x, std::size_t c_y,
                     const std::string& prefix,
                     const std::function<bool(const std::vector<std::string>&)>& keep) {
    std::vector<std::string> order;
    std::map<std::string, Accum> acc;
    for (const auto* r : ok) {
      if (!keep(*r)) continue;
      const std::string name = prefix + (*r)[c_series];
      if (!acc.count(name)) order.push_back(name);
      auto& cell = acc[name][std::stod((*r)[c_x])];
      cell.first += std::stod((*r)[c_y]);
      cell.second += 1;
    }
    std::vector<Series> out;
    for (const std::string& name : order) {
      Series s{.name = name, .x = {}, .y = {}};
      for (const auto& [x, sum] : acc[name]) {
        s.x.push_back(x);
        s.y.push_back(sum.first / sum.second);
      }
      out.push_back(std::move(s));
    }
    return out;
  };
  auto all = [](const std::vector<std::string>&) { return true; };

  std::map<std::string, std::string> plots;
  plots["dac_vs_lambda.svg"] = RenderSvg(
      {.title = "Drivable area compliance vs off-road weight",
       .x_label = "lambda",
       .y_label = "DAC (top k)",
       .series = grouped(col("head"), col("lambda"), col("dac"), "", all),
       .x_categories = {}});

  const std::size_t c_pre = col("pretrain");
  std::vector<Series> frac =
      grouped(c_pre, col("data_fraction"), col("minade5"), "pretrain=", all);
  for (Series& s : frac) {
    s.name = s.name == "pretrain=1" ? "map-only pretraining" : "from scratch";
  }
  plots["minade5_vs_data_fraction.svg"] =
      RenderSvg({.title = "minADE_5 vs training data fraction",
                 .x_label = "data fraction",
                 .y_label = "minADE_5 (m)",
                 .series = std::move(frac),
                 .x_categories = {}});

  const auto rank_rows = ParseCsv(dac_rank_csv);
  std::vector<Series> by_rank;
  {
    std::vector<std::string> order;
    std::map<std::string, Accum> acc;
    for (std::size_t i = 1; i < rank_rows.size(); ++i) {
      const auto& r = rank_rows[i];
      if (r.size() < 4) continue;
      const std::string name = "lambda=" + r[1];
      if (!acc.count(name)) order.push_back(name);
      auto& cell = acc[name][std::stod(r[2])];
      cell.first += std::stod(r[3]);
      cell.second += 1;
    }
    for (const std::string& name : order) {
      Series s{.name = name, .x = {}, .y = {}};
      for (const auto& [x, sum] : acc[name]) {
        s.x.push_back(x);
        s.y.push_back(sum.first / sum.second);
      }
      by_rank.push_back(std::move(s));
    }
  }
  plots["dac_vs_rank.svg"] = RenderSvg({.title = "DAC by mode rank",
                                        .x_label = "rank",
                                        .y_label = "DAC",
                                        .series = std::move(by_rank),
                                        .x_categories = {}});

  {
    const std::size_t c_variant = col("loss_variant");
    const std::size_t c_dist = col("mean_mode_distance");
    std::vector<std::string> variants;
    std::map<std::string, std::pair<double, int>> acc;
    for (const auto* r : ok) {
      const std::string& v = (*r)[c_variant];
      if (!acc.count(v)) variants.push_back(v);
      acc[v].first += std::stod((*r)[c_dist]);
      acc[v].second += 1;
    }
    Series s{.name = "mean mode distance", .x = {}, .y = {}};
    for (std::size_t i = 0; i < variants.size(); ++i) {
      s.x.push_back(static_cast<double>(i));
      s.y.push_back(acc[variants[i]].first / acc[variants[i]].second);
    }
    plots["mode_distance_by_loss.svg"] =
        RenderSvg({.title = "Mean distance between top modes",
                   .x_label = "loss",
                   .y_label = "mean mode distance (m)",
                   .series = {std::move(s)},
                   .x_categories = std::move(variants)});
  }

  {
    const std::size_t c_head = col("head");
    auto regression = [c_head](const std::vector<std::string>& r) {
      return r[c_head] == "ordinal_regression";
    };
    std::vector<Series> series;
    for (Series& s : grouped(c_head, col("set_size"), col("residual_l1"), "l1 ", regression)) {
      s.name = "mean l1";
      series.push_back(std::move(s));
    }
    for (Series& s :
         grouped(c_head, col("set_size"), col("residual_linf"), "linf ", regression)) {
      s.name = "mean linf";
      series.push_back(std::move(s));
    }
    plots["residuals_vs_anchors.svg"] =
        RenderSvg({.title = "Residual norms vs anchor count",
                   .x_label = "anchors",
                   .y_label = "residual (m)",
                   .series = std::move(series),
                   .x_categories = {}});
  }
  return plots;
}

}  // namespace trajcover
