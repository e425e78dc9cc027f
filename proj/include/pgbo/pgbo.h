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

#ifndef PGBO_PGBO_H_
#define PGBO_PGBO_H_

// C interface to the pgbo library. All objects are opaque handles owned by
// the caller and released with the matching *_free function. Functions
// return a pgbo_status; on failure pgbo_last_error() describes the problem
// (the message is thread-local and valid until the next call on the same
// thread).

#include <stddef.h>
#include <stdint.h>

#if defined(PGBO_BUILDING_LIBRARY)
#define PGBO_API __attribute__((visibility("default")))
#else
#define PGBO_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pgbo_status {
  PGBO_OK = 0,
  PGBO_ERR_INVALID_ARGUMENT = 1,
  PGBO_ERR_CONFIG = 2,
  PGBO_ERR_NUMERICAL = 3,
  PGBO_ERR_ORACLE = 4,
  PGBO_ERR_IO = 5,
  PGBO_ERR_RUNTIME = 6,
} pgbo_status;

typedef struct pgbo_experiment pgbo_experiment;
typedef struct pgbo_game pgbo_game;
typedef struct pgbo_rng pgbo_rng;
typedef struct pgbo_trace pgbo_trace;

PGBO_API const char* pgbo_version(void);
PGBO_API const char* pgbo_last_error(void);
// For PGBO_ERR_CONFIG: offending field path ("" if none) and 1-based line
// (0 if unknown).
PGBO_API const char* pgbo_last_error_field(void);
PGBO_API int pgbo_last_error_line(void);
// Releases strings returned through char** out-parameters.
PGBO_API void pgbo_string_free(char* s);

// Experiments -------------------------------------------------------------

PGBO_API pgbo_status pgbo_experiment_load(const char* path,
                                          pgbo_experiment** out);
PGBO_API pgbo_status pgbo_experiment_parse(const char* yaml_text,
                                           pgbo_experiment** out);
PGBO_API void pgbo_experiment_free(pgbo_experiment* e);
PGBO_API pgbo_status pgbo_experiment_set_seed(pgbo_experiment* e,
                                              uint64_t seed);
PGBO_API pgbo_status pgbo_experiment_set_reps(pgbo_experiment* e, int reps);
PGBO_API pgbo_status pgbo_experiment_set_out_dir(pgbo_experiment* e,
                                                 const char* dir);
// Resolved config as YAML.
PGBO_API pgbo_status pgbo_experiment_emit(const pgbo_experiment* e,
                                          char** yaml_out);
// Runs every repetition and writes manifest, traces and summaries.
// `summary_count` (optional) receives the number of summaries written.
PGBO_API pgbo_status pgbo_experiment_run(const pgbo_experiment* e,
                                         int* summary_count);
// Runs one repetition of a GP solver (finite or infinite) in memory.
PGBO_API pgbo_status pgbo_experiment_solve(const pgbo_experiment* e, int rep,
                                           pgbo_trace** out);
PGBO_API pgbo_status pgbo_experiment_game(const pgbo_experiment* e,
                                          pgbo_game** out);

// Plot data: kind is "path2d", "ei_curve" or "trajectory". Writes CSV to
// `out_path`, or to stdout when it is NULL.
PGBO_API pgbo_status pgbo_plot(const char* kind, const char* const* files,
                               size_t file_count, const char* out_path);

// Games -------------------------------------------------------------------

// Grid of `grid_size` evenly spaced quantities from q_min to q_max.
PGBO_API pgbo_status pgbo_game_cournot(int players, double a, double b,
                                       const double* d, const double* beta,
                                       double q_min, double q_max,
                                       int grid_size, double noise_std,
                                       pgbo_game** out);
PGBO_API pgbo_status pgbo_game_cournot_continuous(
    int players, double a, double b, const double* d, const double* beta,
    double q_min, double q_max, double noise_std, pgbo_game** out);
PGBO_API pgbo_status pgbo_game_common_pool(int players, double growth,
                                           double s0, const double* alpha,
                                           const double* theta, double horizon,
                                           int integration_points,
                                           double gamma_max, double noise_std,
                                           pgbo_game** out);
PGBO_API void pgbo_game_free(pgbo_game* g);
PGBO_API int pgbo_game_player_count(const pgbo_game* g);
// Number of actions of player i for finite games, 0 for intervals.
PGBO_API int pgbo_game_action_count(const pgbo_game* g, int player);
PGBO_API pgbo_status pgbo_game_utilities(const pgbo_game* g, const double* x,
                                         double* utilities_out);
PGBO_API pgbo_status pgbo_game_feedback(const pgbo_game* g, const double* x,
                                        pgbo_rng* rng, double* feedback_out);
PGBO_API pgbo_status pgbo_game_is_nash(const pgbo_game* g, const int* indices,
                                       int* is_nash, double* max_gain);

PGBO_API pgbo_status pgbo_rng_create(uint64_t seed, pgbo_rng** out);
PGBO_API void pgbo_rng_free(pgbo_rng* r);

// Traces ------------------------------------------------------------------

PGBO_API void pgbo_trace_free(pgbo_trace* t);
PGBO_API int pgbo_trace_player_count(const pgbo_trace* t);
PGBO_API int pgbo_trace_row_count(const pgbo_trace* t);
PGBO_API int pgbo_trace_iterations(const pgbo_trace* t);
PGBO_API int pgbo_trace_oracle_calls(const pgbo_trace* t);
PGBO_API double pgbo_trace_final_ei(const pgbo_trace* t);
// Stopping reason as a static string, e.g. "ei_below_threshold".
PGBO_API const char* pgbo_trace_stop_reason(const pgbo_trace* t);
PGBO_API pgbo_status pgbo_trace_final_profile(const pgbo_trace* t,
                                              double* out);
// Fails with PGBO_ERR_INVALID_ARGUMENT for continuous traces.
PGBO_API pgbo_status pgbo_trace_final_indices(const pgbo_trace* t, int* out);
// EI of search row k (0-based over search rows); NaN when out of range.
PGBO_API int pgbo_trace_search_count(const pgbo_trace* t);
PGBO_API double pgbo_trace_search_ei(const pgbo_trace* t, int k);
PGBO_API pgbo_status pgbo_trace_write_csv(const pgbo_trace* t,
                                          const char* path);

// Gaussian primitives -----------------------------------------------------

// Conditions N(mean, cov) (dimension n, cov row-major) on noisy observations
// of the `m` components `observed`. Writes the (n - m)-dimensional posterior
// of the remaining components in order.
PGBO_API pgbo_status pgbo_gaussian_condition(
    int n, const double* mean, const double* cov, int m, const int* observed,
    const double* observations, const double* noise_cov, double* mean_out,
    double* cov_out);
// E[max(Z, 0)] for Z ~ N(mu, sigma^2).
PGBO_API double pgbo_expected_positive_part(double mu, double sigma);
// P(Z1 >= 0, Z2 >= 0) for a bivariate normal (cov row-major 2x2).
PGBO_API pgbo_status pgbo_orthant_probability(const double* mean,
                                              const double* cov, double* out);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // PGBO_PGBO_H_
