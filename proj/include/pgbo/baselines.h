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

#ifndef PGBO_BASELINES_H_
#define PGBO_BASELINES_H_

// Bandit exponential weights for finite games: every player keeps a score per
// action, plays a Gibbs distribution over scores mixed with uniform
// exploration, and updates the played action's score with an
// importance-weighted estimate of its (rescaled) payoff.

#include <vector>

#include <Eigen/Dense>

#include "pgbo/games.h"
#include "pgbo/gp_core.h"

namespace pgbo {

struct ExpWeightsConfig {
  int rounds = 1000;
  // Learning rate eta_t = eta0 / sqrt(t).
  double eta0 = 1.0;
  // Payoffs are mapped to [0, 1] with these bounds (and clamped).
  double utility_min = 0.0;
  double utility_max = 1.0;

  void Validate() const;
};

double ExpWeightsLearningRate(int t, double eta0);
// min(1, t^{-1/3}).
double ExpWeightsExploration(int t);
// softmax(eta * scores).
Eigen::VectorXd GibbsStrategy(const Eigen::VectorXd& scores, double eta);
// (1 - eps) * gibbs + eps / n.
Eigen::VectorXd MixWithUniform(const Eigen::VectorXd& gibbs, double eps);

struct ExpWeightsRound {
  int round = 0;  // 1-based
  std::vector<int> actions;
  Eigen::VectorXd y;
  // Per player: Gibbs strategy after this round's update, and the sampling
  // distribution (with exploration) actually played this round.
  std::vector<Eigen::VectorXd> strategies;
  std::vector<Eigen::VectorXd> sampling;
};

struct ExpWeightsTrace {
  std::vector<ExpWeightsRound> rounds;
  std::vector<Eigen::VectorXd> scores;
  const std::vector<Eigen::VectorXd>& final_strategies() const {
    return rounds.back().strategies;
  }
  // First 1-based round whose played profile equals `target`, or -1.
  int FirstHit(const std::vector<int>& target) const;
};

ExpWeightsTrace ExpWeightsRun(const GameOracle& game,
                              const ExpWeightsConfig& config, Rng& rng);

}  // namespace pgbo

#endif  // PGBO_BASELINES_H_
