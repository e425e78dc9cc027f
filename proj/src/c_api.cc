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
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "pgbo/errors.h"
#include "pgbo/experiment.h"

struct pgbo_experiment {
  pgbo::ExperimentConfig config;
};

struct pgbo_game {
  std::unique_ptr<pgbo::GameOracle> game;
};

struct pgbo_rng {
  pgbo::Rng rng;
};

struct pgbo_trace {
  pgbo::SolveTrace trace;
  int players = 0;
};

namespace {

thread_local std::string last_error;
thread_local std::string last_field;
thread_local int last_line = 0;

pgbo_status Fail(pgbo_status s, const std::string& msg) {
  last_error = msg;
  last_field.clear();
  last_line = 0;
  return s;
}

template <typename F>
pgbo_status Guard(F&& f) {
  try {
    f();
    last_error.clear();
    last_field.clear();
    last_line = 0;
    return PGBO_OK;
  } catch (const pgbo::ConfigError& e) {
    Fail(PGBO_ERR_CONFIG, e.what());
    last_field = e.field();
    last_line = e.line();
    return PGBO_ERR_CONFIG;
  } catch (const pgbo::OracleError& e) {
    return Fail(PGBO_ERR_ORACLE, e.what());
  } catch (const pgbo::NumericalError& e) {
    return Fail(PGBO_ERR_NUMERICAL, e.what());
  } catch (const std::invalid_argument& e) {
    return Fail(PGBO_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::out_of_range& e) {
    return Fail(PGBO_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return Fail(PGBO_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return Fail(PGBO_ERR_RUNTIME, e.what());
  } catch (...) {
    return Fail(PGBO_ERR_RUNTIME, "unknown error");
  }
}

#define PGBO_REQUIRE(cond, msg) \
  if (!(cond)) return Fail(PGBO_ERR_INVALID_ARGUMENT, msg)

pgbo::Profile ToProfile(const pgbo_game* g, const double* x) {
  return Eigen::Map<const Eigen::VectorXd>(x, g->game->player_count());
}

char* Dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

pgbo::CournotParams Cournot(int players, double a, double b, const double* d,
                            const double* beta, double q_max) {
  pgbo::CournotParams p;
  p.a = a;
  p.b = b;
  p.d.assign(d, d + players);
  p.beta.assign(beta, beta + players);
  p.q_max = q_max;
  return p;
}

}  // namespace

extern "C" {

const char* pgbo_version(void) { return "0.1.0"; }
const char* pgbo_last_error(void) { return last_error.c_str(); }
const char* pgbo_last_error_field(void) { return last_field.c_str(); }
int pgbo_last_error_line(void) { return last_line; }
void pgbo_string_free(char* s) { std::free(s); }

pgbo_status pgbo_experiment_load(const char* path, pgbo_experiment** out) {
  PGBO_REQUIRE(path && out, "null argument");
  return Guard([&] {
    *out = new pgbo_experiment{pgbo::LoadExperimentConfig(path)};
  });
}

pgbo_status pgbo_experiment_parse(const char* yaml_text,
                                  pgbo_experiment** out) {
  PGBO_REQUIRE(yaml_text && out, "null argument");
  return Guard([&] {
    *out = new pgbo_experiment{pgbo::ParseExperimentConfig(yaml_text)};
  });
}

void pgbo_experiment_free(pgbo_experiment* e) { delete e; }

pgbo_status pgbo_experiment_set_seed(pgbo_experiment* e, uint64_t seed) {
  PGBO_REQUIRE(e, "null experiment");
  e->config.seed = seed;
  return PGBO_OK;
}

pgbo_status pgbo_experiment_set_reps(pgbo_experiment* e, int reps) {
  PGBO_REQUIRE(e, "null experiment");
  PGBO_REQUIRE(reps >= 1, "reps must be >= 1");
  e->config.reps = reps;
  return PGBO_OK;
}

pgbo_status pgbo_experiment_set_out_dir(pgbo_experiment* e, const char* dir) {
  PGBO_REQUIRE(e && dir, "null argument");
  PGBO_REQUIRE(*dir, "out_dir must not be empty");
  e->config.out_dir = dir;
  return PGBO_OK;
}

pgbo_status pgbo_experiment_emit(const pgbo_experiment* e, char** yaml_out) {
  PGBO_REQUIRE(e && yaml_out, "null argument");
  return Guard([&] { *yaml_out = Dup(pgbo::EmitExperimentConfig(e->config)); });
}

pgbo_status pgbo_experiment_run(const pgbo_experiment* e, int* summary_count) {
  PGBO_REQUIRE(e, "null experiment");
  return Guard([&] {
    const auto outputs = pgbo::RunExperiment(e->config);
    if (summary_count) *summary_count = static_cast<int>(outputs.summaries.size());
  });
}

pgbo_status pgbo_experiment_solve(const pgbo_experiment* e, int rep,
                                  pgbo_trace** out) {
  PGBO_REQUIRE(e && out, "null argument");
  PGBO_REQUIRE(rep >= 0, "rep must be >= 0");
  PGBO_REQUIRE(e->config.solver_id == "finite" ||
                   e->config.solver_id == "infinite",
               "in-memory solve supports the finite and infinite solvers");
  return Guard([&] {
    const auto game = pgbo::MakeGame(e->config);
    pgbo::Rng rng(e->config.seed + static_cast<std::uint64_t>(rep));
    auto t = std::make_unique<pgbo_trace>();
    t->players = game->player_count();
    t->trace = e->config.solver_id == "finite"
                   ? pgbo::SolveFinite(*game, e->config.finite, rng)
                   : pgbo::SolveInfinite(*game, e->config.infinite, rng);
    *out = t.release();
  });
}

pgbo_status pgbo_experiment_game(const pgbo_experiment* e, pgbo_game** out) {
  PGBO_REQUIRE(e && out, "null argument");
  return Guard([&] { *out = new pgbo_game{pgbo::MakeGame(e->config)}; });
}

pgbo_status pgbo_plot(const char* kind, const char* const* files,
                      size_t file_count, const char* out_path) {
  PGBO_REQUIRE(kind && (files || file_count == 0), "null argument");
  return Guard([&] {
    std::vector<std::string> paths(files, files + file_count);
    if (out_path == nullptr) {
      pgbo::EmitPlotData(kind, paths, std::cout);
      std::cout.flush();
      return;
    }
    std::ostringstream buf;
    pgbo::EmitPlotData(kind, paths, buf);
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
      throw std::filesystem::filesystem_error(
          "cannot write plot data", out_path,
          std::make_error_code(std::errc::io_error));
    }
    f << buf.str();
  });
}

pgbo_status pgbo_game_cournot(int players, double a, double b, const double* d,
                              const double* beta, double q_min, double q_max,
                              int grid_size, double noise_std,
                              pgbo_game** out) {
  PGBO_REQUIRE(players >= 1 && d && beta && out, "invalid argument");
  return Guard([&] {
    *out = new pgbo_game{std::make_unique<pgbo::CournotGame>(
        pgbo::CournotGame::Grid(Cournot(players, a, b, d, beta, q_max),
                                q_min, grid_size, noise_std))};
  });
}

pgbo_status pgbo_game_cournot_continuous(int players, double a, double b,
                                         const double* d, const double* beta,
                                         double q_min, double q_max,
                                         double noise_std, pgbo_game** out) {
  PGBO_REQUIRE(players >= 1 && d && beta && out, "invalid argument");
  return Guard([&] {
    *out = new pgbo_game{std::make_unique<pgbo::CournotGame>(
        pgbo::CournotGame::Continuous(Cournot(players, a, b, d, beta, q_max),
                                      q_min, noise_std))};
  });
}

pgbo_status pgbo_game_common_pool(int players, double growth, double s0,
                                  const double* alpha, const double* theta,
                                  double horizon, int integration_points,
                                  double gamma_max, double noise_std,
                                  pgbo_game** out) {
  PGBO_REQUIRE(players >= 1 && alpha && theta && out, "invalid argument");
  return Guard([&] {
    pgbo::CommonPoolParams p;
    p.growth = growth;
    p.s0 = s0;
    p.alpha.assign(alpha, alpha + players);
    p.theta.assign(theta, theta + players);
    p.horizon = horizon;
    p.integration_points = integration_points;
    p.gamma_max = gamma_max;
    *out = new pgbo_game{std::make_unique<pgbo::CommonPoolGame>(p, noise_std)};
  });
}

void pgbo_game_free(pgbo_game* g) { delete g; }

int pgbo_game_player_count(const pgbo_game* g) {
  return g ? g->game->player_count() : 0;
}

int pgbo_game_action_count(const pgbo_game* g, int player) {
  if (!g || player < 0 || player >= g->game->player_count()) return 0;
  const auto& s = g->game->action_set(player);
  return s.is_finite() ? s.size() : 0;
}

pgbo_status pgbo_game_utilities(const pgbo_game* g, const double* x,
                                double* utilities_out) {
  PGBO_REQUIRE(g && x && utilities_out, "null argument");
  return Guard([&] {
    const Eigen::VectorXd u = g->game->TrueUtilities(ToProfile(g, x));
    std::copy(u.data(), u.data() + u.size(), utilities_out);
  });
}

pgbo_status pgbo_game_feedback(const pgbo_game* g, const double* x,
                               pgbo_rng* rng, double* feedback_out) {
  PGBO_REQUIRE(g && x && rng && feedback_out, "null argument");
  return Guard([&] {
    const Eigen::VectorXd y = g->game->BanditFeedback(ToProfile(g, x), rng->rng);
    std::copy(y.data(), y.data() + y.size(), feedback_out);
  });
}

pgbo_status pgbo_game_is_nash(const pgbo_game* g, const int* indices,
                              int* is_nash, double* max_gain) {
  PGBO_REQUIRE(g && indices && is_nash, "null argument");
  return Guard([&] {
    const std::vector<int> idx(indices, indices + g->game->player_count());
    const pgbo::NashCheck c = pgbo::VerifyNashExhaustive(*g->game, idx);
    *is_nash = c.is_nash ? 1 : 0;
    if (max_gain) *max_gain = c.max_gain;
  });
}

pgbo_status pgbo_rng_create(uint64_t seed, pgbo_rng** out) {
  PGBO_REQUIRE(out, "null argument");
  return Guard([&] { *out = new pgbo_rng{pgbo::Rng(seed)}; });
}

void pgbo_rng_free(pgbo_rng* r) { delete r; }

void pgbo_trace_free(pgbo_trace* t) { delete t; }
int pgbo_trace_player_count(const pgbo_trace* t) { return t ? t->players : 0; }
int pgbo_trace_row_count(const pgbo_trace* t) {
  return t ? static_cast<int>(t->trace.rows.size()) : 0;
}
int pgbo_trace_iterations(const pgbo_trace* t) {
  return t ? t->trace.iterations : 0;
}
int pgbo_trace_oracle_calls(const pgbo_trace* t) {
  return t ? t->trace.oracle_calls : 0;
}
double pgbo_trace_final_ei(const pgbo_trace* t) {
  return t ? t->trace.final_ei : std::numeric_limits<double>::quiet_NaN();
}
const char* pgbo_trace_stop_reason(const pgbo_trace* t) {
  return t ? pgbo::StopReasonName(t->trace.stop) : "";
}

pgbo_status pgbo_trace_final_profile(const pgbo_trace* t, double* out) {
  PGBO_REQUIRE(t && out, "null argument");
  const auto& x = t->trace.final_profile;
  std::copy(x.data(), x.data() + x.size(), out);
  return PGBO_OK;
}

pgbo_status pgbo_trace_final_indices(const pgbo_trace* t, int* out) {
  PGBO_REQUIRE(t && out, "null argument");
  PGBO_REQUIRE(!t->trace.final_indices.empty(),
               "trace has no grid indices (continuous solver)");
  std::copy(t->trace.final_indices.begin(), t->trace.final_indices.end(), out);
  return PGBO_OK;
}

int pgbo_trace_search_count(const pgbo_trace* t) {
  return t ? static_cast<int>(t->trace.search_ei().size()) : 0;
}

double pgbo_trace_search_ei(const pgbo_trace* t, int k) {
  if (!t) return std::numeric_limits<double>::quiet_NaN();
  const auto ei = t->trace.search_ei();
  if (k < 0 || k >= static_cast<int>(ei.size())) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return ei[k];
}

pgbo_status pgbo_trace_write_csv(const pgbo_trace* t, const char* path) {
  PGBO_REQUIRE(t && path, "null argument");
  std::ofstream f(path, std::ios::binary);
  if (!f) return Fail(PGBO_ERR_IO, std::string("cannot write '") + path + "'");
  return Guard([&] { pgbo::WriteTraceCsv(t->trace, f); });
}

pgbo_status pgbo_gaussian_condition(int n, const double* mean,
                                    const double* cov, int m,
                                    const int* observed,
                                    const double* observations,
                                    const double* noise_cov, double* mean_out,
                                    double* cov_out) {
  PGBO_REQUIRE(n >= 1 && m >= 0 && m <= n && mean && cov && mean_out && cov_out,
               "invalid argument");
  PGBO_REQUIRE(m == 0 || (observed && observations && noise_cov),
               "null observation arrays");
  using RowMajor =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  return Guard([&] {
    pgbo::GaussianBelief joint{Eigen::Map<const Eigen::VectorXd>(mean, n),
                               Eigen::Map<const RowMajor>(cov, n, n)};
    const std::vector<int> obs(observed, observed + m);
    const Eigen::VectorXd y =
        m ? Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(observations, m))
          : Eigen::VectorXd();
    const Eigen::MatrixXd noise =
        m ? Eigen::MatrixXd(Eigen::Map<const RowMajor>(noise_cov, m, m))
          : Eigen::MatrixXd();
    const pgbo::GaussianBelief post = pgbo::Condition(joint, obs, y, noise);
    const int k = static_cast<int>(post.mean.size());
    Eigen::Map<Eigen::VectorXd>(mean_out, k) = post.mean;
    Eigen::Map<RowMajor>(cov_out, k, k) = post.cov;
  });
}

double pgbo_expected_positive_part(double mu, double sigma) {
  try {
    return pgbo::ExpectedPositivePart(mu, sigma);
  } catch (const std::exception& e) {
    Fail(PGBO_ERR_INVALID_ARGUMENT, e.what());
    return std::numeric_limits<double>::quiet_NaN();
  }
}

pgbo_status pgbo_orthant_probability(const double* mean, const double* cov,
                                     double* out) {
  PGBO_REQUIRE(mean && cov && out, "null argument");
  return Guard([&] {
    pgbo::GaussianBelief b{Eigen::Vector2d(mean[0], mean[1]),
                           (Eigen::Matrix2d() << cov[0], cov[1], cov[2], cov[3])
                               .finished()};
    *out = pgbo::OrthantProbability(b);
  });
}

}  // extern "C"
