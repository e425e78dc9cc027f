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

// Batch front end:
//   pgbo run <config.yaml> [--seed N] [--out-dir DIR] [--reps N]
//   pgbo plot <path2d|ei_curve|trajectory> <files...> [-o FILE]
// Exit codes: 0 success, 2 invalid config or usage, 3 runtime failure.

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pgbo/pgbo.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

int Report(pgbo_status s) {
  if (s == PGBO_ERR_CONFIG) {
    std::fprintf(stderr, "config error: %s\n", pgbo_last_error());
    return kExitConfig;
  }
  std::fprintf(stderr, "error: %s\n", pgbo_last_error());
  return kExitRuntime;
}

int Run(const std::string& config, std::optional<std::uint64_t> seed,
        const std::string& out_dir, std::optional<int> reps) {
  pgbo_experiment* e = nullptr;
  pgbo_status s = pgbo_experiment_load(config.c_str(), &e);
  if (s != PGBO_OK) return Report(s);
  if (seed) s = pgbo_experiment_set_seed(e, *seed);
  if (s == PGBO_OK && !out_dir.empty()) {
    s = pgbo_experiment_set_out_dir(e, out_dir.c_str());
  }
  if (s == PGBO_OK && reps) s = pgbo_experiment_set_reps(e, *reps);
  if (s != PGBO_OK) {
    // Bad override values are config errors.
    std::fprintf(stderr, "config error: %s\n", pgbo_last_error());
    pgbo_experiment_free(e);
    return kExitConfig;
  }
  int written = 0;
  s = pgbo_experiment_run(e, &written);
  pgbo_experiment_free(e);
  if (s != PGBO_OK) return Report(s);
  std::fprintf(stderr, "wrote %d repetition(s)\n", written);
  return 0;
}

int Plot(const std::string& kind, const std::vector<std::string>& files,
         const std::string& out) {
  std::vector<const char*> paths;
  for (const auto& f : files) paths.push_back(f.c_str());
  const pgbo_status s = pgbo_plot(kind.c_str(), paths.data(), paths.size(),
                                  out.empty() ? nullptr : out.c_str());
  if (s == PGBO_OK) return 0;
  if (s == PGBO_ERR_INVALID_ARGUMENT) {
    std::fprintf(stderr, "error: %s\n", pgbo_last_error());
    return kExitConfig;
  }
  return Report(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nash equilibria of potential games from bandit feedback"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pgbo_version()));

  CLI::App* run = app.add_subcommand("run", "Run an experiment config");
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::optional<int> reps;
  run->add_option("config", config, "YAML experiment config")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Override the base seed");
  run->add_option("--out-dir", out_dir, "Override the output directory");
  run->add_option("--reps", reps, "Override the number of repetitions")
      ->check(CLI::PositiveNumber);

  CLI::App* plot = app.add_subcommand("plot", "Emit plot-ready CSV");
  std::string kind;
  std::vector<std::string> files;
  std::string out;
  plot->add_option("kind", kind, "path2d, ei_curve or trajectory")
      ->required()
      ->check(CLI::IsMember({"path2d", "ei_curve", "trajectory"}));
  plot->add_option("files", files, "Trace CSVs or summary JSONs")
      ->required()
      ->check(CLI::ExistingFile);
  plot->add_option("-o,--output", out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version exit 0; malformed invocations are config errors.
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }

  if (*run) return Run(config, seed, out_dir, reps);
  return Plot(kind, files, out);
}
