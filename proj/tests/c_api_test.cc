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

#include "pgbo/pgbo.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>

#include "doctest.h"

namespace {

namespace fs = std::filesystem;

const double kD[2] = {5.0, 5.0};
const double kBeta[2] = {0.95, 1.95};

std::string ConfigPath(const char* name) {
  return std::string(PGBO_SOURCE_DIR) + "/configs/" + name + ".yaml";
}

fs::path Scratch(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() /
                     ("pgbo_capi_" + tag + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

TEST_CASE("version and string ownership") {
  CHECK(std::strlen(pgbo_version()) > 0);
  pgbo_string_free(nullptr);
}

TEST_CASE("config errors carry field and line") {
  pgbo_experiment* e = nullptr;
  const char* bad =
      "seed: 1\ngame:\n  id: cournot\n  beta: [0.95, 3]\n"
      "gp:\n  length_scales: 2\nsolver:\n  id: finite\n";
  CHECK(pgbo_experiment_parse(bad, &e) == PGBO_ERR_CONFIG);
  CHECK(e == nullptr);
  CHECK(std::string(pgbo_last_error_field()) == "game.beta[1]");
  CHECK(pgbo_last_error_line() == 4);
  CHECK(std::string(pgbo_last_error()).find("(0, 2)") != std::string::npos);

  CHECK(pgbo_experiment_load("/nonexistent.yaml", &e) == PGBO_ERR_CONFIG);
  CHECK(pgbo_experiment_parse(nullptr, &e) == PGBO_ERR_INVALID_ARGUMENT);
}

TEST_CASE("experiment lifecycle") {
  pgbo_experiment* e = nullptr;
  REQUIRE(pgbo_experiment_load(ConfigPath("cournot_finite").c_str(), &e) ==
          PGBO_OK);
  CHECK(pgbo_experiment_set_seed(e, 7) == PGBO_OK);
  CHECK(pgbo_experiment_set_reps(e, 0) == PGBO_ERR_INVALID_ARGUMENT);
  CHECK(pgbo_experiment_set_reps(e, 3) == PGBO_OK);
  const fs::path dir = Scratch("run");
  CHECK(pgbo_experiment_set_out_dir(e, dir.c_str()) == PGBO_OK);

  char* yaml = nullptr;
  REQUIRE(pgbo_experiment_emit(e, &yaml) == PGBO_OK);
  const std::string text(yaml);
  pgbo_string_free(yaml);
  CHECK(text.find("seed: 7") != std::string::npos);
  CHECK(text.find("reps: 3") != std::string::npos);

  int count = 0;
  REQUIRE(pgbo_experiment_run(e, &count) == PGBO_OK);
  CHECK(count == 3);
  CHECK(fs::exists(dir / "manifest.yaml"));
  CHECK(fs::exists(dir / "trace_rep002.csv"));
  CHECK(fs::exists(dir / "summary_rep002.json"));

  // In-memory solve of repetition 2 matches the file written by run.
  pgbo_trace* t = nullptr;
  REQUIRE(pgbo_experiment_solve(e, 2, &t) == PGBO_OK);
  const fs::path mine = dir / "mine.csv";
  REQUIRE(pgbo_trace_write_csv(t, mine.c_str()) == PGBO_OK);
  std::ifstream a(mine), b(dir / "trace_rep002.csv");
  std::stringstream sa, sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  CHECK(sa.str() == sb.str());

  CHECK(pgbo_trace_player_count(t) == 2);
  CHECK(pgbo_trace_row_count(t) == pgbo_trace_oracle_calls(t));
  CHECK(pgbo_trace_search_count(t) == pgbo_trace_iterations(t));
  const std::string reason = pgbo_trace_stop_reason(t);
  CHECK((reason == "ei_below_threshold" || reason == "max_iterations"));
  double profile[2];
  int idx[2];
  CHECK(pgbo_trace_final_profile(t, profile) == PGBO_OK);
  CHECK(pgbo_trace_final_indices(t, idx) == PGBO_OK);
  CHECK(idx[0] >= 0);
  CHECK(idx[0] < 31);
  if (reason == "ei_below_threshold") CHECK(pgbo_trace_final_ei(t) < 5e-2);
  CHECK(std::isnan(pgbo_trace_search_ei(t, -1)));
  for (int k = 0; k < pgbo_trace_search_count(t); ++k) {
    CHECK(pgbo_trace_search_ei(t, k) >= 5e-2);
  }
  CHECK(pgbo_trace_write_csv(t, "/nonexistent/dir/x.csv") == PGBO_ERR_IO);

  // Game handle from the config agrees with the trace.
  pgbo_game* g = nullptr;
  REQUIRE(pgbo_experiment_game(e, &g) == PGBO_OK);
  CHECK(pgbo_game_action_count(g, 0) == 31);
  int nash = -1;
  double gain = 0.0;
  CHECK(pgbo_game_is_nash(g, idx, &nash, &gain) == PGBO_OK);
  CHECK((nash == 0 || nash == 1));

  const std::string files[2] = {(dir / "trace_rep000.csv").string(),
                                (dir / "trace_rep001.csv").string()};
  const char* paths[2] = {files[0].c_str(), files[1].c_str()};
  const fs::path plot = dir / "ei.csv";
  CHECK(pgbo_plot("ei_curve", paths, 2, plot.c_str()) == PGBO_OK);
  CHECK(fs::file_size(plot) > 0);
  CHECK(pgbo_plot("nope", paths, 2, plot.c_str()) == PGBO_ERR_INVALID_ARGUMENT);

  pgbo_game_free(g);
  pgbo_trace_free(t);
  pgbo_experiment_free(e);
  fs::remove_all(dir);
}

TEST_CASE("continuous traces have no grid indices") {
  pgbo_experiment* e = nullptr;
  REQUIRE(pgbo_experiment_load(ConfigPath("cournot_infinite").c_str(), &e) ==
          PGBO_OK);
  pgbo_trace* t = nullptr;
  REQUIRE(pgbo_experiment_solve(e, 0, &t) == PGBO_OK);
  int idx[2];
  CHECK(pgbo_trace_final_indices(t, idx) == PGBO_ERR_INVALID_ARGUMENT);
  double x[2];
  CHECK(pgbo_trace_final_profile(t, x) == PGBO_OK);
  CHECK(x[0] > 0.0);
  pgbo_trace_free(t);
  pgbo_experiment_free(e);

  REQUIRE(pgbo_experiment_load(ConfigPath("cournot_exp_weights").c_str(), &e) ==
          PGBO_OK);
  CHECK(pgbo_experiment_solve(e, 0, &t) == PGBO_ERR_INVALID_ARGUMENT);
  pgbo_experiment_free(e);
}

TEST_CASE("game handles") {
  pgbo_game* g = nullptr;
  REQUIRE(pgbo_game_cournot_continuous(2, 10, 1, kD, kBeta, 1e-3, 10, 0.0, &g) ==
          PGBO_OK);
  CHECK(pgbo_game_player_count(g) == 2);
  CHECK(pgbo_game_action_count(g, 0) == 0);
  const double x[2] = {1.0, 1.0};
  double u[2];
  CHECK(pgbo_game_utilities(g, x, u) == PGBO_OK);
  CHECK(u[0] == doctest::Approx(3.0));
  CHECK(u[1] == doctest::Approx(3.0));
  const double outside[2] = {20.0, 1.0};
  CHECK(pgbo_game_utilities(g, outside, u) == PGBO_ERR_INVALID_ARGUMENT);

  pgbo_rng* r = nullptr;
  REQUIRE(pgbo_rng_create(3, &r) == PGBO_OK);
  double y[2];
  CHECK(pgbo_game_feedback(g, x, r, y) == PGBO_OK);
  CHECK(y[0] == u[0]);  // noiseless
  pgbo_rng_free(r);
  pgbo_game_free(g);

  const double bad_beta[2] = {0.95, 2.5};
  CHECK(pgbo_game_cournot(2, 10, 1, kD, bad_beta, 1e-3, 10, 31, 0.0, &g) ==
        PGBO_ERR_INVALID_ARGUMENT);
  CHECK(pgbo_game_cournot(2, 10, 1, kD, kBeta, 1e-3, 10, 31, 0.0, nullptr) ==
        PGBO_ERR_INVALID_ARGUMENT);

  const double alpha[2] = {0.3, 0.2}, theta[2] = {0.95, 0.95};
  REQUIRE(pgbo_game_common_pool(2, 0.9, 1.0, alpha, theta, 4.0, 10000, 3.0, 0.0,
                                &g) == PGBO_OK);
  const double zero[2] = {0.0, 0.0};
  CHECK(pgbo_game_utilities(g, zero, u) == PGBO_OK);
  CHECK(u[0] == 0.0);
  pgbo_game_free(g);

  pgbo_game_free(nullptr);
  CHECK(pgbo_game_player_count(nullptr) == 0);
}

TEST_CASE("grid Nash check through the handle") {
  pgbo_game* g = nullptr;
  REQUIRE(pgbo_game_cournot(2, 10, 1, kD, kBeta, 1e-3, 10, 31, 0.0, &g) ==
          PGBO_OK);
  int best[2] = {0, 0};
  double best_phi = -1e300;
  // Scan for the unique pure equilibrium.
  for (int i = 0; i < 31; ++i) {
    for (int j = 0; j < 31; ++j) {
      const int idx[2] = {i, j};
      int nash = 0;
      REQUIRE(pgbo_game_is_nash(g, idx, &nash, nullptr) == PGBO_OK);
      if (nash) {
        best[0] = i;
        best[1] = j;
        best_phi = 0.0;
      }
    }
  }
  CHECK(best_phi == 0.0);
  CHECK(best[0] == 7);
  CHECK(best[1] == 2);
  const int off[2] = {99, 0};
  int nash = 0;
  CHECK(pgbo_game_is_nash(g, off, &nash, nullptr) != PGBO_OK);
  pgbo_game_free(g);
}

TEST_CASE("Gaussian primitives") {
  // 2-D joint, observe the second coordinate exactly.
  const double mean[2] = {1.0, 2.0};
  const double cov[4] = {2.0, 1.0, 1.0, 1.0};
  const int obs[1] = {1};
  const double y[1] = {3.0};
  const double noise[1] = {0.0};
  double m_out[1], c_out[1];
  REQUIRE(pgbo_gaussian_condition(2, mean, cov, 1, obs, y, noise, m_out,
                                  c_out) == PGBO_OK);
  CHECK(m_out[0] == doctest::Approx(2.0));
  CHECK(c_out[0] == doctest::Approx(1.0));

  const double asym[4] = {2.0, 1.0, 0.0, 1.0};
  CHECK(pgbo_gaussian_condition(2, mean, asym, 1, obs, y, noise, m_out,
                                c_out) == PGBO_ERR_INVALID_ARGUMENT);

  CHECK(pgbo_expected_positive_part(1.0, 0.0) == 1.0);
  CHECK(pgbo_expected_positive_part(0.0, 1.0) ==
        doctest::Approx(1.0 / std::sqrt(2.0 * M_PI)));
  CHECK(std::isnan(pgbo_expected_positive_part(0.0, -1.0)));

  const double zm[2] = {0.0, 0.0};
  const double corr[4] = {1.0, 0.5, 0.5, 1.0};
  double p = 0.0;
  REQUIRE(pgbo_orthant_probability(zm, corr, &p) == PGBO_OK);
  CHECK(p == doctest::Approx(0.25 + std::asin(0.5) / (2 * M_PI)));
}

}  // namespace
