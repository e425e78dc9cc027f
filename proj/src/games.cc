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

#include "pgbo/games.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pgbo/errors.h"

namespace pgbo {

ActionSet ActionSet::Interval(double lo, double hi) {
  if (!(lo < hi)) throw InvalidArgument("interval action set needs lo < hi");
  ActionSet s;
  s.finite_ = false;
  s.lo_ = lo;
  s.hi_ = hi;
  return s;
}

ActionSet ActionSet::Finite(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("finite action set is empty");
  ActionSet s;
  s.finite_ = true;
  s.lo_ = *std::min_element(values.begin(), values.end());
  s.hi_ = *std::max_element(values.begin(), values.end());
  s.values_ = std::move(values);
  return s;
}

bool ActionSet::Contains(double v) const {
  if (finite_) return std::find(values_.begin(), values_.end(), v) != values_.end();
  return v >= lo_ && v <= hi_;
}

double ActionSet::Clip(double v) const { return std::clamp(v, lo_, hi_); }

GameOracle::GameOracle(std::vector<ActionSet> action_sets, double noise_std)
    : action_sets_(std::move(action_sets)), noise_std_(noise_std) {
  if (action_sets_.empty()) throw InvalidArgument("game needs >= 1 player");
  if (!(noise_std >= 0.0)) throw InvalidArgument("noise_std must be >= 0");
}

bool GameOracle::all_finite() const {
  return std::all_of(action_sets_.begin(), action_sets_.end(),
                     [](const ActionSet& s) { return s.is_finite(); });
}

bool GameOracle::all_intervals() const {
  return std::none_of(action_sets_.begin(), action_sets_.end(),
                      [](const ActionSet& s) { return s.is_finite(); });
}

void GameOracle::CheckProfile(const Profile& x) const {
  if (x.size() != player_count()) {
    throw InvalidArgument("profile has " + std::to_string(x.size()) +
                          " entries, game has " +
                          std::to_string(player_count()) + " players");
  }
  for (int i = 0; i < x.size(); ++i) {
    if (!action_sets_[i].Contains(x[i])) {
      throw InvalidArgument("action " + std::to_string(x[i]) + " of player " +
                            std::to_string(i) + " is outside its action set");
    }
  }
}

Eigen::VectorXd GameOracle::BanditFeedback(const Profile& x, Rng& rng) const {
  Eigen::VectorXd y = TrueUtilities(x);
  if (noise_std_ > 0.0) {
    std::normal_distribution<double> noise(0.0, noise_std_);
    for (int i = 0; i < y.size(); ++i) y[i] += noise(rng);
  }
  return y;
}

Profile GameOracle::ProfileFromIndices(std::span<const int> indices) const {
  if (static_cast<int>(indices.size()) != player_count()) {
    throw InvalidArgument("index profile has wrong length");
  }
  Profile x(player_count());
  for (int i = 0; i < player_count(); ++i) {
    const ActionSet& s = action_sets_[i];
    if (!s.is_finite()) throw InvalidArgument("player action set is not finite");
    if (indices[i] < 0 || indices[i] >= s.size()) {
      throw InvalidArgument("action index out of range for player " +
                            std::to_string(i));
    }
    x[i] = s.values()[indices[i]];
  }
  return x;
}

Eigen::VectorXd FunctionGame::TrueUtilities(const Profile& x) const {
  CheckProfile(x);
  Eigen::VectorXd u = fn_(x);
  if (u.size() != player_count()) {
    throw InvalidArgument("utility function returned wrong number of values");
  }
  return u;
}

void CournotParams::Validate() const {
  if (!(a > 0.0)) throw InvalidArgument("cournot.a must be > 0");
  if (!(b > 0.0)) throw InvalidArgument("cournot.b must be > 0");
  if (d.empty()) throw InvalidArgument("cournot.d must name >= 1 player");
  if (beta.size() != d.size()) {
    throw InvalidArgument("cournot.beta must have one entry per player");
  }
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!(d[i] >= 0.0)) {
      throw InvalidArgument("cournot.d[" + std::to_string(i) + "] must be >= 0");
    }
    if (!(beta[i] > 0.0 && beta[i] < 2.0)) {
      throw InvalidArgument("cournot.beta[" + std::to_string(i) +
                            "] must lie in (0, 2)");
    }
  }
  if (!(q_max > 0.0)) throw InvalidArgument("cournot.q_max must be > 0");
}

namespace {

void CheckQuantities(const Profile& q, const CournotParams& p) {
  if (q.size() != p.players()) {
    throw InvalidArgument("quantity profile has wrong length");
  }
  for (int i = 0; i < q.size(); ++i) {
    if (!(q[i] > 0.0)) {
      throw InvalidArgument("quantity q[" + std::to_string(i) + "] must be > 0");
    }
  }
}

}  // namespace

Eigen::VectorXd CournotUtilities(const Profile& q, const CournotParams& p) {
  CheckQuantities(q, p);
  const double price = p.a - p.b * q.sum();
  Eigen::VectorXd u(q.size());
  for (int i = 0; i < q.size(); ++i) {
    u[i] = q[i] * price - p.d[i] * std::pow(q[i], p.beta[i]);
  }
  return u;
}

double CournotPotential(const Profile& q, const CournotParams& p) {
  CheckQuantities(q, p);
  const double total = q.sum();
  // sum_i q_i^2 + sum_{i<j} q_i q_j = (total^2 + sum q_i^2) / 2.
  const double quad = 0.5 * (total * total + q.squaredNorm());
  double phi = p.a * total - p.b * quad;
  for (int i = 0; i < q.size(); ++i) phi -= p.d[i] * std::pow(q[i], p.beta[i]);
  return phi;
}

std::vector<double> CournotGrid(double q_min, double q_max, int n) {
  if (n < 2) throw InvalidArgument("grid size must be >= 2");
  if (!(q_min > 0.0) || !(q_min < q_max)) {
    throw InvalidArgument("Cournot grid needs 0 < q_min < q_max");
  }
  std::vector<double> g(n, q_min);
  for (int k = 1; k < n; ++k) {
    g[k] = k + 1 == n ? q_max : q_min + (q_max - q_min) * k / (n - 1);
  }
  return g;
}

CournotGame::CournotGame(CournotParams params,
                         std::vector<ActionSet> action_sets, double noise_std)
    : GameOracle(std::move(action_sets), noise_std), params_(std::move(params)) {
  params_.Validate();
  if (player_count() != params_.players()) {
    throw InvalidArgument("one action set per Cournot player required");
  }
}

CournotGame CournotGame::Grid(CournotParams params, double q_min,
                              int grid_size, double noise_std) {
  params.Validate();
  std::vector<ActionSet> sets(
      params.players(),
      ActionSet::Finite(CournotGrid(q_min, params.q_max, grid_size)));
  return CournotGame(std::move(params), std::move(sets), noise_std);
}

CournotGame CournotGame::Continuous(CournotParams params, double q_min,
                                    double noise_std) {
  params.Validate();
  std::vector<ActionSet> sets(params.players(),
                              ActionSet::Interval(q_min, params.q_max));
  return CournotGame(std::move(params), std::move(sets), noise_std);
}

Eigen::VectorXd CournotGame::TrueUtilities(const Profile& x) const {
  CheckProfile(x);
  return CournotUtilities(x, params_);
}

double CournotGame::Potential(const Profile& x) const {
  CheckProfile(x);
  return CournotPotential(x, params_);
}

void CommonPoolParams::Validate() const {
  if (!(growth >= 0.0)) throw InvalidArgument("common_pool.growth must be >= 0");
  if (!(s0 > 0.0)) throw InvalidArgument("common_pool.s0 must be > 0");
  if (alpha.empty()) throw InvalidArgument("common_pool.alpha must name >= 1 player");
  if (theta.size() != alpha.size()) {
    throw InvalidArgument("common_pool.theta must have one entry per player");
  }
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (!(alpha[i] > 0.0)) {
      throw InvalidArgument("common_pool.alpha[" + std::to_string(i) +
                            "] must be > 0");
    }
    if (!(theta[i] >= growth)) {
      throw InvalidArgument("common_pool.theta[" + std::to_string(i) +
                            "] must be >= growth");
    }
  }
  if (!(horizon > 0.0)) throw InvalidArgument("common_pool.horizon must be > 0");
  if (integration_points < 2) {
    throw InvalidArgument("common_pool.integration_points must be >= 2");
  }
  if (!(gamma_max > 0.0)) throw InvalidArgument("common_pool.gamma_max must be > 0");
}

Eigen::VectorXd CommonPoolPayoff(const Eigen::VectorXd& gamma,
                                 const CommonPoolParams& p) {
  if (gamma.size() != p.players()) {
    throw InvalidArgument("gamma has wrong length");
  }
  for (int i = 0; i < gamma.size(); ++i) {
    if (!(gamma[i] >= 0.0)) {
      throw InvalidArgument("gamma[" + std::to_string(i) + "] must be >= 0");
    }
  }
  const double rate = p.growth - gamma.sum();
  const int n = p.integration_points;
  const double dt = p.horizon / (n - 1);
  Eigen::VectorXd j = Eigen::VectorXd::Zero(gamma.size());
  for (int i = 0; i < gamma.size(); ++i) {
    if (gamma[i] == 0.0) continue;
    // (gamma_i s0 e^{rate t})^alpha e^{-theta t} = c * e^{(alpha rate - theta) t}
    const double c = std::pow(gamma[i] * p.s0, p.alpha[i]);
    const double expo = p.alpha[i] * rate - p.theta[i];
    double acc = 0.5 * (1.0 + std::exp(expo * p.horizon));
    for (int k = 1; k < n - 1; ++k) acc += std::exp(expo * (k * dt));
    j[i] = c * acc * dt;
  }
  return j;
}

CommonPoolGame::CommonPoolGame(CommonPoolParams params, double noise_std)
    : GameOracle(std::vector<ActionSet>(params.players(),
                                        ActionSet::Interval(0.0, params.gamma_max)),
                 noise_std),
      params_(std::move(params)) {
  params_.Validate();
}

Eigen::VectorXd CommonPoolGame::TrueUtilities(const Profile& x) const {
  CheckProfile(x);
  return CommonPoolPayoff(x, params_);
}

NashCheck VerifyNashExhaustive(const GameOracle& game,
                               std::span<const int> indices) {
  const Profile x = game.ProfileFromIndices(indices);
  const Eigen::VectorXd u = game.TrueUtilities(x);
  NashCheck out;
  out.max_gain = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < game.player_count(); ++i) {
    const auto& values = game.action_set(i).values();
    for (int a = 0; a < static_cast<int>(values.size()); ++a) {
      if (a == indices[i]) continue;
      Profile dev = x;
      dev[i] = values[a];
      const double gain = game.TrueUtilities(dev)[i] - u[i];
      if (gain > out.max_gain) {
        out.max_gain = gain;
        out.best_player = i;
      }
    }
  }
  // Single-action games have no deviations.
  if (out.best_player < 0) out.max_gain = 0.0;
  out.is_nash = out.max_gain <= 0.0;
  return out;
}

Eigen::VectorXd BestResponseGains(const GameOracle& game, const Profile& x,
                                  int grid_points) {
  if (grid_points < 2) throw InvalidArgument("grid_points must be >= 2");
  const Eigen::VectorXd u = game.TrueUtilities(x);
  Eigen::VectorXd gains = Eigen::VectorXd::Zero(game.player_count());
  for (int i = 0; i < game.player_count(); ++i) {
    const ActionSet& s = game.action_set(i);
    double best = 0.0;
    const int n = s.is_finite() ? s.size() : grid_points;
    for (int k = 0; k < n; ++k) {
      Profile dev = x;
      dev[i] = s.is_finite() ? s.values()[k]
                             : s.lo() + (s.hi() - s.lo()) * k / (n - 1);
      best = std::max(best, game.TrueUtilities(dev)[i] - u[i]);
    }
    gains[i] = best;
  }
  return gains;
}

std::vector<std::vector<int>> EnumeratePureNash(const GameOracle& game) {
  if (!game.all_finite()) throw InvalidArgument("game is not finite");
  const int n = game.player_count();
  std::vector<int> idx(n, 0);
  std::vector<std::vector<int>> out;
  for (;;) {
    if (VerifyNashExhaustive(game, idx).is_nash) out.push_back(idx);
    int p = 0;
    while (p < n && ++idx[p] == game.action_set(p).size()) idx[p++] = 0;
    if (p == n) break;
  }
  return out;
}

namespace {

double SampleAction(const ActionSet& s, Rng& rng) {
  if (s.is_finite()) {
    std::uniform_int_distribution<int> pick(0, s.size() - 1);
    return s.values()[pick(rng)];
  }
  std::uniform_real_distribution<double> pick(s.lo(), s.hi());
  return pick(rng);
}

}  // namespace

double VerifyPotentialDifferences(const GameOracle& game,
                                  const PotentialFn& potential, int samples,
                                  Rng& rng) {
  const int n = game.player_count();
  std::uniform_int_distribution<int> pick_player(0, n - 1);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    Profile x(n);
    for (int i = 0; i < n; ++i) x[i] = SampleAction(game.action_set(i), rng);
    const int i = pick_player(rng);
    Profile y = x;
    y[i] = SampleAction(game.action_set(i), rng);
    const double du = game.TrueUtilities(y)[i] - game.TrueUtilities(x)[i];
    const double dphi = potential(y) - potential(x);
    worst = std::max(worst, std::abs(du - dphi));
  }
  return worst;
}

double VerifyPotentialGradient(const GameOracle& game,
                               const PotentialFn& potential, int samples,
                               Rng& rng, double h) {
  if (!game.all_intervals()) {
    throw InvalidArgument("gradient check needs interval action sets");
  }
  const int n = game.player_count();
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    Profile x(n);
    for (int i = 0; i < n; ++i) {
      const ActionSet& set = game.action_set(i);
      std::uniform_real_distribution<double> pick(set.lo() + h, set.hi() - h);
      x[i] = pick(rng);
    }
    for (int i = 0; i < n; ++i) {
      Profile up = x, down = x;
      up[i] += h;
      down[i] -= h;
      const double du =
          (game.TrueUtilities(up)[i] - game.TrueUtilities(down)[i]) / (2 * h);
      const double dphi = (potential(up) - potential(down)) / (2 * h);
      worst = std::max(worst, std::abs(du - dphi));
    }
  }
  return worst;
}

}  // namespace pgbo
