// Copyright 2026 The pgbo Authors. All rights reserved.
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

#ifndef PGBO_EXPERIMENT_H_
#define PGBO_EXPERIMENT_H_

// Batch experiment runner: a YAML config names a game, a solver and GP
// hyperparameters; RunExperiment executes every repetition and writes
//   <out_dir>/manifest.yaml          resolved config (re-runnable)
//   <out_dir>/trace_repNNN.csv       per-repetition trace
//   <out_dir>/summary_repNNN.json    per-repetition summary
// The grammar is documented in README.md.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pgbo/baselines.h"
#include "pgbo/finite_solver.h"
#include "pgbo/games.h"
#include "pgbo/infinite_solver.h"

namespace pgbo {

struct ExperimentConfig {
  std::uint64_t seed = 0;
  int reps = 1;
  std::string out_dir = "out";

  std::string game_id;  // "cournot" | "common_pool"
  double noise_std = 1e-3;
  CournotParams cournot;
  int grid_size = 31;
  double q_min = 1e-3;
  CommonPoolParams common_pool;

  std::string solver_id;  // "finite" | "infinite" | "exp_weights"
  FiniteSolverConfig finite;
  InfiniteSolverConfig infinite;
  ExpWeightsConfig exp_weights;

  // Shared GP block; copied into the solver configs on load.
  GpHyperparams gp;
};

// Throws ConfigError naming the offending field and line.
ExperimentConfig ParseExperimentConfig(const std::string& yaml_text);
ExperimentConfig LoadExperimentConfig(const std::string& path);

// Fully resolved config; parsing the output yields an identical config.
std::string EmitExperimentConfig(const ExperimentConfig& config);

struct ExperimentOutputs {
  std::string manifest;
  std::vector<std::string> traces;
  std::vector<std::string> summaries;
};

// Runs config.reps repetitions with seeds seed + r.
ExperimentOutputs RunExperiment(const ExperimentConfig& config);

// Builds the configured game oracle.
std::unique_ptr<GameOracle> MakeGame(const ExperimentConfig& config);

// Writers used by RunExperiment (exposed for tests).
std::string SummaryJson(const ExperimentConfig& config, int rep,
                        const SolveTrace& trace, const GameOracle& game,
                        double wall_time_s);
void WriteExpWeightsCsv(const ExpWeightsTrace& trace, const GameOracle& game,
                        std::ostream& out);

// Plot-ready CSV for kind "path2d", "ei_curve" (trace CSVs) or "trajectory"
// (common-pool summary JSONs).
void EmitPlotData(const std::string& kind,
                  const std::vector<std::string>& files, std::ostream& out);

}  // namespace pgbo

#endif  // PGBO_EXPERIMENT_H_
