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

#ifndef PGBO_FINITE_SOLVER_H_
#define PGBO_FINITE_SOLVER_H_

// Nash search for potential games with finite action sets. The potential Phi
// carries a GP prior; each path step observes the deviator's utility
// difference, which equals the potential difference between consecutive
// profiles. Candidates are the unilateral deviations of the current profile,
// scored by E[Phi(candidate) - Phi(current)]_+ under the differenced-GP
// posterior.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pgbo/games.h"
#include "pgbo/gp_core.h"
#include "pgbo/path.h"
#include "pgbo/trace.h"

namespace pgbo {

// One action index per player.
using GridProfile = std::vector<int>;

enum class Acquisition {
  kExpectedImprovement,
  // Exploitation-only diagnostic: score candidates by the posterior mean of Z.
  kPosteriorMean,
};

struct FiniteSolverConfig {
  GpHyperparams hyperparams;
  int n_initial = 11;
  double ei_termination = 5e-2;
  int max_iterations = 100;
  // Exact covariance for differences that share a measurement, instead of
  // the independent 2 nu^2 model.
  bool correlated_noise = false;
  Acquisition acquisition = Acquisition::kExpectedImprovement;

  void Validate(int players) const;
};

struct ZPosterior {
  double mean = 0.0;
  double variance = 0.0;
};

// All profiles differing from `current` in exactly one coordinate, ordered by
// player index and then action index.
std::vector<GridProfile> FipNeighborhood(const GridProfile& current,
                                         std::span<const int> action_counts);

// (n-1) x n matrix with -1 on the diagonal and +1 on the superdiagonal.
Eigen::MatrixXd DifferencingMatrix(int n);

// Joint prior of (Delta U_1..Delta U_k, Z) where Z = Phi(candidate) -
// Phi(path.back()). `candidate` may equal path.back() (Z is then degenerate
// at 0); any other non-unilateral candidate is rejected.
GaussianBelief DifferencedPrior(const PathHistory& path,
                                const Profile& candidate,
                                const GpHyperparams& h);

// Posterior of Z given the path's observed differences. Reference route:
// DifferencedPrior followed by Condition.
ZPosterior PosteriorZ(const PathHistory& path, const Profile& candidate,
                      const GpHyperparams& h, bool correlated_noise = false);

// Caches the factorized observation block of one path snapshot so each
// candidate costs one triangular solve.
class DifferencedModel {
 public:
  DifferencedModel(const PathHistory& path, const GpHyperparams& h,
                   bool correlated_noise = false);
  ZPosterior PosteriorZ(const Profile& candidate) const;

 private:
  std::vector<Profile> points_;
  GpHyperparams h_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd alpha_;  // S^{-1} delta_y
};

struct Choice {
  int index = -1;
  double value = 0.0;
};

// First maximum of E[Z]_+ (ties go to the earliest entry).
Choice ArgmaxExpectedImprovement(std::span<const ZPosterior> posteriors);
Choice ArgmaxPosteriorMean(std::span<const ZPosterior> posteriors);

struct NextAction {
  GridProfile profile;
  double value = 0.0;
};

// Scores every FIP neighbour of `current` (which must be the profile at the
// end of `path`) and returns the best one with its acquisition value.
NextAction SelectNextAction(const PathHistory& path, const GridProfile& current,
                            std::span<const ActionSet> action_sets,
                            const GpHyperparams& h,
                            bool correlated_noise = false,
                            Acquisition acquisition =
                                Acquisition::kExpectedImprovement);

// Latin-hypercube design of `n` grid profiles, connected into a path by
// inserting intermediate profiles that change one player at a time (player
// order). Consecutive design points equal in some coordinates need fewer
// links; the result has between n and players * (n - 1) + 1 profiles.
std::vector<GridProfile> SpaceFillingPath(std::span<const int> action_counts,
                                          int n, Rng& rng);

SolveTrace SolveFinite(const GameOracle& game, const FiniteSolverConfig& config,
                       Rng& rng);

}  // namespace pgbo

#endif  // PGBO_FINITE_SOLVER_H_
