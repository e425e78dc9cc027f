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

#ifndef PGBO_GAMES_H_
#define PGBO_GAMES_H_

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pgbo/gp_core.h"
#include "pgbo/path.h"

namespace pgbo {

// A player's action set: either a finite list of real actions or a closed
// interval [lo, hi].
class ActionSet {
 public:
  static ActionSet Interval(double lo, double hi);
  static ActionSet Finite(std::vector<double> values);

  bool is_finite() const { return finite_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  // Finite sets only.
  const std::vector<double>& values() const { return values_; }
  int size() const { return static_cast<int>(values_.size()); }

  bool Contains(double v) const;
  double Clip(double v) const;

 private:
  bool finite_ = false;
  double lo_ = 0.0;
  double hi_ = 0.0;
  std::vector<double> values_;
};

// Black-box game queried through bandit feedback
//   y_i = u_i(x) + e_i,  e_i ~ N(0, noise_std^2) independent.
class GameOracle {
 public:
  GameOracle(std::vector<ActionSet> action_sets, double noise_std);
  virtual ~GameOracle() = default;

  int player_count() const { return static_cast<int>(action_sets_.size()); }
  const ActionSet& action_set(int i) const { return action_sets_.at(i); }
  const std::vector<ActionSet>& action_sets() const { return action_sets_; }
  double noise_std() const { return noise_std_; }
  bool all_finite() const;
  bool all_intervals() const;

  // Noiseless utilities of every player at `x`.
  virtual Eigen::VectorXd TrueUtilities(const Profile& x) const = 0;
  Eigen::VectorXd BanditFeedback(const Profile& x, Rng& rng) const;

  // Maps grid indices to real coordinates (finite games).
  Profile ProfileFromIndices(std::span<const int> indices) const;

 protected:
  void CheckProfile(const Profile& x) const;

 private:
  std::vector<ActionSet> action_sets_;
  double noise_std_;
};

// Game defined by an arbitrary utility callable; used for synthetic tests and
// user-supplied black boxes.
class FunctionGame : public GameOracle {
 public:
  using UtilityFn = std::function<Eigen::VectorXd(const Profile&)>;
  FunctionGame(std::vector<ActionSet> action_sets, double noise_std,
               UtilityFn fn)
      : GameOracle(std::move(action_sets), noise_std), fn_(std::move(fn)) {}
  Eigen::VectorXd TrueUtilities(const Profile& x) const override;

 private:
  UtilityFn fn_;
};

// Cournot oligopoly with price a - b * sum(q) and cost d_i q_i^beta_i.
struct CournotParams {
  double a = 10.0;
  double b = 1.0;
  std::vector<double> d = {5.0, 5.0};
  std::vector<double> beta = {0.95, 1.95};
  double q_max = 10.0;

  int players() const { return static_cast<int>(d.size()); }
  void Validate() const;
};

Eigen::VectorXd CournotUtilities(const Profile& q, const CournotParams& p);

// Exact potential of the Cournot game:
//   a sum q_i - b (sum q_i^2 + sum_{i<j} q_i q_j) - sum d_i q_i^beta_i.
double CournotPotential(const Profile& q, const CournotParams& p);

// n evenly spaced points from q_min to q_max inclusive (q_min alone if n = 1).
std::vector<double> CournotGrid(double q_min, double q_max, int n);

class CournotGame : public GameOracle {
 public:
  CournotGame(CournotParams params, std::vector<ActionSet> action_sets,
              double noise_std);
  // Discretized game on CournotGrid(q_min, q_max, grid_size) for every
  // player.
  static CournotGame Grid(CournotParams params, double q_min, int grid_size,
                          double noise_std);
  // Continuous game on [q_min, q_max] for every player.
  static CournotGame Continuous(CournotParams params, double q_min,
                                double noise_std);

  const CournotParams& params() const { return params_; }
  Eigen::VectorXd TrueUtilities(const Profile& x) const override;
  double Potential(const Profile& x) const;

 private:
  CournotParams params_;
};

// Common-pool resource differential game under linear strategies
// x_i(t) = gamma_i s(t), with s(t) = s0 exp((a - sum gamma) t).
struct CommonPoolParams {
  double growth = 0.9;
  double s0 = 1.0;
  std::vector<double> alpha = {0.3, 0.2};
  std::vector<double> theta = {0.95, 0.95};
  double horizon = 4.0;
  int integration_points = 10000;
  double gamma_max = 3.0;

  int players() const { return static_cast<int>(alpha.size()); }
  void Validate() const;
};

// J_i = int_0^T (gamma_i s(t))^alpha_i exp(-theta_i t) dt by the composite
// trapezoid rule on `integration_points` nodes.
Eigen::VectorXd CommonPoolPayoff(const Eigen::VectorXd& gamma,
                                 const CommonPoolParams& p);

class CommonPoolGame : public GameOracle {
 public:
  CommonPoolGame(CommonPoolParams params, double noise_std);
  const CommonPoolParams& params() const { return params_; }
  Eigen::VectorXd TrueUtilities(const Profile& x) const override;

 private:
  CommonPoolParams params_;
};

struct NashCheck {
  bool is_nash = false;
  // Largest utility gain over all unilateral deviations (<= 0 at a Nash).
  double max_gain = 0.0;
  int best_player = -1;
};

// Exhaustive unilateral-deviation check on a finite game's noiseless utilities.
NashCheck VerifyNashExhaustive(const GameOracle& game,
                               std::span<const int> indices);

// Per-player best gain from deviating to any of `grid_points` evenly spaced
// actions of that player's interval (continuous games).
Eigen::VectorXd BestResponseGains(const GameOracle& game, const Profile& x,
                                  int grid_points);

// Exhaustive pure-Nash enumeration for finite games (test oracle).
std::vector<std::vector<int>> EnumeratePureNash(const GameOracle& game);

using PotentialFn = std::function<double(const Profile&)>;

// Max |Delta u_i - Delta Phi| over `samples` random unilateral deviations.
// Finite games draw grid actions; interval games draw uniform actions.
double VerifyPotentialDifferences(const GameOracle& game,
                                  const PotentialFn& potential, int samples,
                                  Rng& rng);

// Max |du_i/dx_i - dPhi/dx_i| over `samples` random points and all players,
// by central finite differences with step `h` (interval games only).
double VerifyPotentialGradient(const GameOracle& game,
                               const PotentialFn& potential, int samples,
                               Rng& rng, double h = 1e-5);

}  // namespace pgbo

#endif  // PGBO_GAMES_H_
