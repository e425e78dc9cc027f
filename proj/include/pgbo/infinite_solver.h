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

#ifndef PGBO_INFINITE_SOLVER_H_
#define PGBO_INFINITE_SOLVER_H_

// Nash search for potential games with interval action sets.
//
// A unilateral step from x^{k-1} to x^k by player d changes d's utility by
//   Delta u = Phi(x^k) - Phi(x^{k-1}) = Delta x * int_0^1 dPhi/dx_d(r(tau)) dtau
// with r(tau) the straight segment between the two profiles, so every
// measured utility difference is a noisy integral observation of the
// potential gradient. The solver conditions the GP on these observations,
// picks a signed coordinate direction per player, runs a probabilistic Wolfe
// backtracking line search per player, and moves the player with the largest
// expected improvement of the potential.

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pgbo/games.h"
#include "pgbo/gp_core.h"
#include "pgbo/path.h"
#include "pgbo/trace.h"

namespace pgbo {

struct LineSearchParams {
  double c1 = 1e-4;
  double c2 = 0.8;
  double wolfe_threshold = 0.3;
  double max_step = 1.0;
  double backtrack_factor = 0.75;
  int max_backtracks = 30;

  void Validate() const;
};

struct InfiniteSolverConfig {
  GpHyperparams hyperparams;
  LineSearchParams line_search;
  double ei_termination = 1e-4;
  int max_iterations = 100;
  // Gauss-Legendre points per dimension for the double integrals.
  int quadrature_order = 16;
  bool correlated_noise = false;
  // Start profile; drawn uniformly from the action box when unset.
  std::optional<Profile> start;
  // Cold-start probe length per player, as a fraction of max_step.
  double warmup_fraction = 0.1;

  void Validate(int players) const;
};

// Covariances between the integral observations of a path and GP quantities
// at query points:
//   gamma(k, q*I + i) = cov(Delta U_k, dPhi(x_q)/dx_i)
//   eta(k, q)         = cov(Delta U_k, Phi(x_q))
//   pi(k, l)          = cov(Delta U_k, Delta U_l)
struct IntegralCovBlocks {
  Eigen::MatrixXd gamma;
  Eigen::MatrixXd pi;
  Eigen::MatrixXd eta;
};

// gamma and eta use the exact antiderivative of the SE kernel along each
// axis-aligned segment; pi uses tensor-product Gauss-Legendre quadrature.
IntegralCovBlocks ComputeIntegralCovBlocks(const PathHistory& path,
                                           std::span<const Profile> queries,
                                           const GpHyperparams& h,
                                           int quadrature_order = 16);

// The integral observations of one path snapshot with the factorized
// observation covariance pi + noise cached.
class IntegralObservationModel {
 public:
  IntegralObservationModel(const PathHistory& path, const GpHyperparams& h,
                           int quadrature_order = 16,
                           bool correlated_noise = false);

  int steps() const { return static_cast<int>(deviators_.size()); }
  const Eigen::MatrixXd& pi() const { return pi_; }
  const GpHyperparams& hyperparams() const { return h_; }

  // m x I block cov(Delta U, grad Phi(x)).
  Eigen::MatrixXd Gamma(const Profile& x) const;
  // m-vector cov(Delta U, Phi(x)).
  Eigen::VectorXd Eta(const Profile& x) const;

  // Posterior over the full gradient of Phi at `x`.
  GaussianBelief PosteriorGradient(const Profile& x) const;

  // Posterior over (Phi(xbar), Phi(x), dPhi(xbar)/dx_i, dPhi(x)/dx_i).
  GaussianBelief JointValueGrad(const Profile& x, const Profile& xbar,
                                int i) const;

  // Generic route for tests: the unconditioned joint prior of the same four
  // quantities stacked with Delta U, plus the observation vector and noise.
  GaussianBelief JointValueGradPrior(const Profile& x, const Profile& xbar,
                                     int i) const;
  const Eigen::VectorXd& observations() const { return delta_y_; }
  const Eigen::MatrixXd& noise() const { return noise_; }

 private:
  GaussianBelief Posterior(const GaussianBelief& prior,
                           const Eigen::MatrixXd& cross) const;

  GpHyperparams h_;
  std::vector<Profile> starts_;
  std::vector<Profile> ends_;
  std::vector<int> deviators_;
  Eigen::VectorXd delta_y_;
  Eigen::MatrixXd pi_;
  Eigen::MatrixXd noise_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd alpha_;
};

GaussianBelief PosteriorGradient(const PathHistory& path, const Profile& query,
                                 const GpHyperparams& h,
                                 int quadrature_order = 16);

GaussianBelief JointValueGradPosterior(const Profile& x, const Profile& xbar,
                                       int i, const PathHistory& path,
                                       const GpHyperparams& h,
                                       int quadrature_order = 16);

// sign(E[dPhi/dx_i]) with sign(0) = +1.
int AscentSign(const GaussianBelief& gradient_posterior, int i);
// p_i = sign(E[dPhi/dx_i]) e_i.
Eigen::VectorXd AscentDirection(const GaussianBelief& gradient_posterior,
                                int i);

// Probability that a step of length `delta` along sign * e_i satisfies both
// Wolfe conditions:
//   a = Phi(xbar) - Phi(x) - c1 delta g(x) >= 0
//   b = c2 g(x) - g(xbar) >= 0,   g = sign * dPhi/dx_i
// `joint` is ordered (Phi(xbar), Phi(x), dPhi(xbar)/dx_i, dPhi(x)/dx_i).
double WolfeProbability(const GaussianBelief& joint, double delta, int sign,
                        const LineSearchParams& params);

struct LineSearchResult {
  int player = -1;
  bool accepted = false;
  int sign = 1;
  double delta = 0.0;            // nominal step max_step * beta^t
  double effective_delta = 0.0;  // after clipping to the action interval
  double p_w = 0.0;
  int trials = 0;
  bool clipped = false;
  Profile candidate;
  GaussianBelief joint;
};

// Tries delta = max_step, beta max_step, ... and accepts the first step whose
// Wolfe probability reaches the threshold. Candidates are clipped to the
// player's interval; a step that cannot move ends the search as a rejection.
LineSearchResult BacktrackingLineSearch(int player,
                                        const IntegralObservationModel& model,
                                        const Profile& x, int sign,
                                        const ActionSet& action_set,
                                        const LineSearchParams& params);

// E[Phi(xbar) - Phi(x)]_+ from the four-dimensional joint.
double ImprovementEi(const GaussianBelief& joint);

struct PlayerChoice {
  int index = -1;
  double ei = 0.0;
};
// Index into `results` of the accepted player with the largest
// ImprovementEi (lowest index on ties), or -1 when every search rejected.
PlayerChoice SelectPlayer(std::span<const LineSearchResult> results);

SolveTrace SolveInfinite(const GameOracle& game,
                         const InfiniteSolverConfig& config, Rng& rng);

}  // namespace pgbo

#endif  // PGBO_INFINITE_SOLVER_H_
