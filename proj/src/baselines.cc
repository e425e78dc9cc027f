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

#include "pgbo/baselines.h"

#include <algorithm>
#include <cmath>

#include "pgbo/errors.h"

namespace pgbo {

void ExpWeightsConfig::Validate() const {
  if (rounds < 1) throw InvalidArgument("rounds must be >= 1");
  if (!(eta0 > 0.0)) throw InvalidArgument("eta0 must be > 0");
  if (!(utility_max > utility_min)) {
    throw InvalidArgument("utility_max must exceed utility_min");
  }
}

double ExpWeightsLearningRate(int t, double eta0) {
  return eta0 / std::sqrt(static_cast<double>(t));
}

double ExpWeightsExploration(int t) {
  return std::min(1.0, std::pow(static_cast<double>(t), -1.0 / 3.0));
}

Eigen::VectorXd GibbsStrategy(const Eigen::VectorXd& scores, double eta) {
  Eigen::VectorXd z = eta * scores;
  z.array() -= z.maxCoeff();
  Eigen::VectorXd p = z.array().exp();
  return p / p.sum();
}

Eigen::VectorXd MixWithUniform(const Eigen::VectorXd& gibbs, double eps) {
  const double n = static_cast<double>(gibbs.size());
  Eigen::VectorXd p = (1.0 - eps) * gibbs;
  p.array() += eps / n;
  return p / p.sum();
}

int ExpWeightsTrace::FirstHit(const std::vector<int>& target) const {
  for (const auto& r : rounds) {
    if (r.actions == target) return r.round;
  }
  return -1;
}

ExpWeightsTrace ExpWeightsRun(const GameOracle& game,
                              const ExpWeightsConfig& config, Rng& rng) {
  if (!game.all_finite()) {
    throw InvalidArgument("exponential weights needs finite action sets");
  }
  config.Validate();
  const int n = game.player_count();
  ExpWeightsTrace trace;
  for (int i = 0; i < n; ++i) {
    trace.scores.push_back(Eigen::VectorXd::Zero(game.action_set(i).size()));
  }
  const double range = config.utility_max - config.utility_min;

  for (int t = 1; t <= config.rounds; ++t) {
    const double eta = ExpWeightsLearningRate(t, config.eta0);
    const double eps = ExpWeightsExploration(t);
    ExpWeightsRound round;
    round.round = t;
    round.actions.resize(n);
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd p =
          MixWithUniform(GibbsStrategy(trace.scores[i], eta), eps);
      std::discrete_distribution<int> pick(p.data(), p.data() + p.size());
      round.actions[i] = pick(rng);
      round.sampling.push_back(std::move(p));
    }
    Eigen::VectorXd y;
    try {
      y = game.BanditFeedback(game.ProfileFromIndices(round.actions), rng);
    } catch (const std::exception& e) {
      throw OracleError(t, e.what());
    }
    for (int i = 0; i < n; ++i) {
      const int a = round.actions[i];
      const double r =
          std::clamp((y[i] - config.utility_min) / range, 0.0, 1.0);
      trace.scores[i][a] += r / round.sampling[i][a];
      // Strategy for the next round's learning rate.
      round.strategies.push_back(GibbsStrategy(
          trace.scores[i], ExpWeightsLearningRate(t + 1, config.eta0)));
    }
    round.y = std::move(y);
    trace.rounds.push_back(std::move(round));
  }
  return trace;
}

}  // namespace pgbo
