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

#include "pgbo/finite_solver.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pgbo/errors.h"

namespace pgbo {

void FiniteSolverConfig::Validate(int players) const {
  hyperparams.Validate();
  if (hyperparams.dim() != players) {
    throw InvalidArgument("length_scales must have one entry per player");
  }
  if (n_initial < 1) throw InvalidArgument("n_initial must be >= 1");
  if (!(ei_termination > 0.0)) {
    throw InvalidArgument("ei_termination must be > 0");
  }
  if (max_iterations < 0) throw InvalidArgument("max_iterations must be >= 0");
}

std::vector<GridProfile> FipNeighborhood(const GridProfile& current,
                                         std::span<const int> action_counts) {
  if (current.size() != action_counts.size()) {
    throw InvalidArgument("profile length does not match player count");
  }
  std::vector<GridProfile> out;
  for (std::size_t i = 0; i < current.size(); ++i) {
    for (int a = 0; a < action_counts[i]; ++a) {
      if (a == current[i]) continue;
      GridProfile g = current;
      g[i] = a;
      out.push_back(std::move(g));
    }
  }
  return out;
}

Eigen::MatrixXd DifferencingMatrix(int n) {
  if (n < 1) throw InvalidArgument("differencing matrix needs >= 1 point");
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n - 1, n);
  for (int r = 0; r + 1 < n; ++r) {
    b(r, r) = -1.0;
    b(r, r + 1) = 1.0;
  }
  return b;
}

namespace {

void CheckCandidate(const PathHistory& path, const Profile& candidate) {
  if (path.empty()) throw InvalidArgument("path is empty");
  if (candidate.size() != path.back().size()) {
    throw InvalidArgument("candidate has wrong dimension");
  }
  if (candidate != path.back() && UniqueDeviator(path.back(), candidate) < 0) {
    throw InvalidArgument("candidate is not a unilateral deviation of the "
                          "current profile");
  }
}

}  // namespace

GaussianBelief DifferencedPrior(const PathHistory& path,
                                const Profile& candidate,
                                const GpHyperparams& h) {
  CheckCandidate(path, candidate);
  std::vector<Profile> pts = path.profiles();
  pts.push_back(candidate);
  const int n = static_cast<int>(pts.size());
  const Eigen::MatrixXd k = SeGram(pts, h);
  const Eigen::VectorXd mu = Eigen::VectorXd::Constant(n, h.prior_mean);
  return GaussianBelief(mu, k).Map(DifferencingMatrix(n));
}

ZPosterior PosteriorZ(const PathHistory& path, const Profile& candidate,
                      const GpHyperparams& h, bool correlated_noise) {
  const GaussianBelief prior = DifferencedPrior(path, candidate, h);
  const int m = path.steps();
  std::vector<int> observed(m);
  std::iota(observed.begin(), observed.end(), 0);
  const GaussianBelief post =
      Condition(prior, observed, path.delta_y(),
                DifferenceNoiseCov(path, h.noise_variance, correlated_noise),
                JitterPolicy::ForHyperparams(h));
  return {post.mean[0], std::max(post.cov(0, 0), 0.0)};
}

DifferencedModel::DifferencedModel(const PathHistory& path,
                                   const GpHyperparams& h,
                                   bool correlated_noise)
    : points_(path.profiles()), h_(h) {
  if (path.empty()) throw InvalidArgument("path is empty");
  const int m = path.steps();
  if (m == 0) return;
  const Eigen::MatrixXd b = DifferencingMatrix(m + 1);
  Eigen::MatrixXd s = b * SeGram(points_, h_) * b.transpose();
  s += DifferenceNoiseCov(path, h.noise_variance, correlated_noise);
  s = 0.5 * (s + s.transpose());
  llt_ = FactorizeWithJitter(s, JitterPolicy::ForHyperparams(h_));
  alpha_ = llt_.solve(path.delta_y());
}

ZPosterior DifferencedModel::PosteriorZ(const Profile& candidate) const {
  const int n = static_cast<int>(points_.size());
  const Profile& last = points_.back();
  if (candidate.size() != last.size()) {
    throw InvalidArgument("candidate has wrong dimension");
  }
  if (candidate != last && UniqueDeviator(last, candidate) < 0) {
    throw InvalidArgument("candidate is not a unilateral deviation of the "
                          "current profile");
  }
  const double prior_var = SeKernel(candidate, candidate, h_) -
                           2.0 * SeKernel(candidate, last, h_) +
                           SeKernel(last, last, h_);
  if (n == 1) return {0.0, std::max(prior_var, 0.0)};

  // cov(Delta_j, Z) = [k(x^j,c) - k(x^{j-1},c)] - [k(x^j,x^m) - k(x^{j-1},x^m)]
  Eigen::VectorXd kc(n);
  Eigen::VectorXd kl(n);
  for (int j = 0; j < n; ++j) {
    kc[j] = SeKernel(points_[j], candidate, h_);
    kl[j] = SeKernel(points_[j], last, h_);
  }
  Eigen::VectorXd cross(n - 1);
  for (int j = 1; j < n; ++j) {
    cross[j - 1] = (kc[j] - kc[j - 1]) - (kl[j] - kl[j - 1]);
  }
  const double mean = cross.dot(alpha_);
  const Eigen::VectorXd v = llt_.matrixL().solve(cross);
  return {mean, std::max(prior_var - v.squaredNorm(), 0.0)};
}

Choice ArgmaxExpectedImprovement(std::span<const ZPosterior> posteriors) {
  Choice best;
  for (int c = 0; c < static_cast<int>(posteriors.size()); ++c) {
    const double v = ExpectedPositivePart(posteriors[c].mean,
                                          std::sqrt(posteriors[c].variance));
    if (best.index < 0 || v > best.value) best = {c, v};
  }
  return best;
}

Choice ArgmaxPosteriorMean(std::span<const ZPosterior> posteriors) {
  Choice best;
  for (int c = 0; c < static_cast<int>(posteriors.size()); ++c) {
    if (best.index < 0 || posteriors[c].mean > best.value) {
      best = {c, posteriors[c].mean};
    }
  }
  return best;
}

namespace {

Profile ToCoordinates(const GridProfile& g,
                      std::span<const ActionSet> action_sets) {
  Profile x(static_cast<Eigen::Index>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i) {
    x[i] = action_sets[i].values().at(g[i]);
  }
  return x;
}

std::vector<int> ActionCounts(std::span<const ActionSet> action_sets) {
  std::vector<int> counts;
  for (const auto& s : action_sets) {
    if (!s.is_finite()) throw InvalidArgument("action set is not finite");
    counts.push_back(s.size());
  }
  return counts;
}

}  // namespace

NextAction SelectNextAction(const PathHistory& path, const GridProfile& current,
                            std::span<const ActionSet> action_sets,
                            const GpHyperparams& h, bool correlated_noise,
                            Acquisition acquisition) {
  const std::vector<int> counts = ActionCounts(action_sets);
  if (path.empty()) throw InvalidArgument("path is empty");
  if (ToCoordinates(current, action_sets) != path.back()) {
    throw InvalidArgument("current grid profile is not the end of the path");
  }
  const auto candidates = FipNeighborhood(current, counts);
  if (candidates.empty()) return {current, 0.0};
  const DifferencedModel model(path, h, correlated_noise);
  std::vector<ZPosterior> post;
  post.reserve(candidates.size());
  for (const auto& c : candidates) {
    post.push_back(model.PosteriorZ(ToCoordinates(c, action_sets)));
  }
  const Choice best = acquisition == Acquisition::kPosteriorMean
                          ? ArgmaxPosteriorMean(post)
                          : ArgmaxExpectedImprovement(post);
  return {candidates[best.index], best.value};
}

std::vector<GridProfile> SpaceFillingPath(std::span<const int> action_counts,
                                          int n, Rng& rng) {
  if (n < 1) throw InvalidArgument("space-filling design needs n >= 1");
  const int players = static_cast<int>(action_counts.size());
  for (int c : action_counts) {
    if (c < 1) throw InvalidArgument("empty action set");
  }

  // Latin hypercube on the index grid: player i takes one value from each of
  // n strata of [0, c_i), in an independent random order.
  std::vector<GridProfile> design(n, GridProfile(players));
  for (int i = 0; i < players; ++i) {
    const int c = action_counts[i];
    std::vector<int> column(n);
    for (int k = 0; k < n; ++k) {
      const int lo = static_cast<int>(static_cast<long long>(k) * c / n);
      const int hi = std::max(
          lo, static_cast<int>(static_cast<long long>(k + 1) * c / n) - 1);
      std::uniform_int_distribution<int> pick(lo, std::min(hi, c - 1));
      column[k] = pick(rng);
    }
    std::shuffle(column.begin(), column.end(), rng);
    for (int k = 0; k < n; ++k) design[k][i] = column[k];
  }

  // Chain the design points, changing one coordinate at a time.
  std::vector<GridProfile> path{design[0]};
  for (int k = 1; k < n; ++k) {
    GridProfile cur = path.back();
    for (int i = 0; i < players; ++i) {
      if (cur[i] == design[k][i]) continue;
      cur[i] = design[k][i];
      path.push_back(cur);
    }
  }
  return path;
}

namespace {

Eigen::VectorXd Measure(const GameOracle& game, const Profile& x, Rng& rng,
                        int step) {
  try {
    return game.BanditFeedback(x, rng);
  } catch (const std::exception& e) {
    throw OracleError(step, e.what());
  }
}

}  // namespace

SolveTrace SolveFinite(const GameOracle& game, const FiniteSolverConfig& config,
                       Rng& rng) {
  if (!game.all_finite()) {
    throw InvalidArgument("finite solver needs finite action sets");
  }
  config.Validate(game.player_count());
  const auto& sets = game.action_sets();
  const std::vector<int> counts = ActionCounts(sets);

  SolveTrace trace;
  trace.solver = "finite";
  int step = 0;
  auto record = [&](const Profile& x, const std::string& phase, double ei) {
    TraceRow row;
    row.step = step;
    row.phase = phase;
    row.profile = x;
    row.ei = ei;
    if (trace.path.size() > 1) {
      row.deviator = trace.path.deviators().back();
      row.delta_y = trace.path.delta_y()[trace.path.steps() - 1];
    }
    trace.rows.push_back(std::move(row));
    ++step;
  };

  GridProfile current;
  for (const GridProfile& g : SpaceFillingPath(counts, config.n_initial, rng)) {
    const Profile x = ToCoordinates(g, sets);
    const Eigen::VectorXd y = Measure(game, x, rng, step);
    ++trace.oracle_calls;
    if (trace.path.empty()) {
      trace.path.Start(x, y);
    } else {
      trace.path.Append(x, y);
    }
    current = g;
    record(x, "init", std::numeric_limits<double>::quiet_NaN());
  }

  trace.stop = StopReason::kMaxIterations;
  for (int it = 0; it < config.max_iterations; ++it) {
    const NextAction next =
        SelectNextAction(trace.path, current, sets, config.hyperparams,
                         config.correlated_noise, config.acquisition);
    trace.final_ei = next.value;
    if (next.value < config.ei_termination) {
      trace.stop = StopReason::kEiBelowThreshold;
      break;
    }
    const Profile x = ToCoordinates(next.profile, sets);
    const Eigen::VectorXd y = Measure(game, x, rng, step);
    ++trace.oracle_calls;
    trace.path.Append(x, y);
    current = next.profile;
    ++trace.iterations;
    record(x, "search", next.value);
  }
  if (trace.stop == StopReason::kMaxIterations && config.max_iterations > 0) {
    // Report the acquisition value at the final profile too.
    trace.final_ei = SelectNextAction(trace.path, current, sets,
                                      config.hyperparams,
                                      config.correlated_noise,
                                      config.acquisition)
                         .value;
  }
  trace.final_profile = trace.path.back();
  trace.final_indices = current;
  return trace;
}

}  // namespace pgbo
