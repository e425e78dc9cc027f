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

#include "pgbo/infinite_solver.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "pgbo/errors.h"
#include "pgbo/quadrature.h"

namespace pgbo {

void LineSearchParams::Validate() const {
  if (!(c1 > 0.0 && c1 < c2 && c2 <= 1.0)) {
    throw InvalidArgument("line search needs 0 < c1 < c2 <= 1");
  }
  if (!(wolfe_threshold > 0.0 && wolfe_threshold < 1.0) &&
      wolfe_threshold != 0.0) {
    throw InvalidArgument("wolfe_threshold must lie in [0, 1)");
  }
  if (!(max_step > 0.0)) throw InvalidArgument("max_step must be > 0");
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0)) {
    throw InvalidArgument("backtrack_factor must lie in (0, 1)");
  }
  if (max_backtracks < 1) throw InvalidArgument("max_backtracks must be >= 1");
}

void InfiniteSolverConfig::Validate(int players) const {
  hyperparams.Validate();
  if (hyperparams.dim() != players) {
    throw InvalidArgument("length_scales must have one entry per player");
  }
  line_search.Validate();
  if (!(ei_termination > 0.0)) {
    throw InvalidArgument("ei_termination must be > 0");
  }
  if (max_iterations < 0) throw InvalidArgument("max_iterations must be >= 0");
  if (quadrature_order < 2) {
    throw InvalidArgument("quadrature_order must be >= 2");
  }
  if (start && start->size() != players) {
    throw InvalidArgument("start profile has wrong length");
  }
  if (!(warmup_fraction > 0.0)) {
    throw InvalidArgument("warmup_fraction must be > 0");
  }
}

namespace {

struct Segment {
  const Profile* start;
  const Profile* end;
  int dev;
  double dx;
};

std::vector<Segment> Segments(const std::vector<Profile>& starts,
                              const std::vector<Profile>& ends,
                              const std::vector<int>& devs) {
  std::vector<Segment> out;
  for (std::size_t k = 0; k < devs.size(); ++k) {
    out.push_back({&starts[k], &ends[k], devs[k],
                   ends[k][devs[k]] - starts[k][devs[k]]});
  }
  return out;
}

// Delta x_k Delta x_l int int k^{DD}_{d_k,d_l}(r^k(t), r^l(s)) dt ds.
double PiEntry(const Segment& a, const Segment& b, const GpHyperparams& h,
               const GaussLegendreRule& rule) {
  Profile ra = *a.start;
  Profile rb = *b.start;
  double acc = 0.0;
  for (int p = 0; p < rule.order(); ++p) {
    ra[a.dev] = (*a.start)[a.dev] + rule.nodes[p] * a.dx;
    double inner = 0.0;
    for (int q = 0; q < rule.order(); ++q) {
      rb[b.dev] = (*b.start)[b.dev] + rule.nodes[q] * b.dx;
      inner += rule.weights[q] * SeKernelHess(a.dev, b.dev, ra, rb, h);
    }
    acc += rule.weights[p] * inner;
  }
  return a.dx * b.dx * acc;
}

Eigen::MatrixXd PiMatrix(const std::vector<Segment>& segs,
                         const GpHyperparams& h, int order) {
  const GaussLegendreRule rule = GaussLegendreUnit(order);
  const int m = static_cast<int>(segs.size());
  Eigen::MatrixXd pi(m, m);
  for (int k = 0; k < m; ++k) {
    for (int l = k; l < m; ++l) {
      pi(k, l) = pi(l, k) = PiEntry(segs[k], segs[l], h, rule);
    }
  }
  return pi;
}

// Delta x int_0^1 k^{DD}_{d,i}(r(t), x) dt = kD_i(end, x) - kD_i(start, x).
double GammaEntry(const Segment& s, int i, const Profile& x,
                  const GpHyperparams& h) {
  return SeKernelGrad(i, *s.end, x, h) - SeKernelGrad(i, *s.start, x, h);
}

// Delta x int_0^1 d k(r(t), x) / dr_d dt = k(end, x) - k(start, x).
double EtaEntry(const Segment& s, const Profile& x, const GpHyperparams& h) {
  return SeKernel(*s.end, x, h) - SeKernel(*s.start, x, h);
}

void CheckPath(const PathHistory& path) {
  for (int k = 1; k <= path.steps(); ++k) {
    const int d = path.deviator(k);
    if (path.profile(k)[d] == path.profile(k - 1)[d]) {
      throw InvalidArgument("zero-length segment at step " + std::to_string(k));
    }
  }
}

}  // namespace

IntegralCovBlocks ComputeIntegralCovBlocks(const PathHistory& path,
                                           std::span<const Profile> queries,
                                           const GpHyperparams& h,
                                           int quadrature_order) {
  if (quadrature_order < 2) {
    throw InvalidArgument("quadrature_order must be >= 2");
  }
  CheckPath(path);
  const int m = path.steps();
  std::vector<Profile> starts, ends;
  for (int k = 1; k <= m; ++k) {
    starts.push_back(path.profile(k - 1));
    ends.push_back(path.profile(k));
  }
  const auto segs = Segments(starts, ends, path.deviators());
  const int dim = h.dim();
  const int nq = static_cast<int>(queries.size());
  IntegralCovBlocks out;
  out.pi = PiMatrix(segs, h, quadrature_order);
  out.gamma.resize(m, nq * dim);
  out.eta.resize(m, nq);
  for (int k = 0; k < m; ++k) {
    for (int q = 0; q < nq; ++q) {
      out.eta(k, q) = EtaEntry(segs[k], queries[q], h);
      for (int i = 0; i < dim; ++i) {
        out.gamma(k, q * dim + i) = GammaEntry(segs[k], i, queries[q], h);
      }
    }
  }
  return out;
}

IntegralObservationModel::IntegralObservationModel(const PathHistory& path,
                                                   const GpHyperparams& h,
                                                   int quadrature_order,
                                                   bool correlated_noise)
    : h_(h), deviators_(path.deviators()), delta_y_(path.delta_y()) {
  h_.Validate();
  if (path.empty()) throw InvalidArgument("path is empty");
  if (path.players() != h_.dim()) {
    throw InvalidArgument("path dimension does not match hyperparameters");
  }
  if (quadrature_order < 2) {
    throw InvalidArgument("quadrature_order must be >= 2");
  }
  CheckPath(path);
  for (int k = 1; k <= path.steps(); ++k) {
    starts_.push_back(path.profile(k - 1));
    ends_.push_back(path.profile(k));
  }
  const auto segs = Segments(starts_, ends_, deviators_);
  pi_ = PiMatrix(segs, h_, quadrature_order);
  noise_ = DifferenceNoiseCov(path, h_.noise_variance, correlated_noise);
  if (steps() > 0) {
    Eigen::MatrixXd s = pi_ + noise_;
    s = 0.5 * (s + s.transpose());
    llt_ = FactorizeWithJitter(s, JitterPolicy::ForHyperparams(h_));
    alpha_ = llt_.solve(delta_y_);
  }
}

Eigen::MatrixXd IntegralObservationModel::Gamma(const Profile& x) const {
  const auto segs = Segments(starts_, ends_, deviators_);
  Eigen::MatrixXd g(steps(), h_.dim());
  for (int k = 0; k < steps(); ++k) {
    for (int i = 0; i < h_.dim(); ++i) g(k, i) = GammaEntry(segs[k], i, x, h_);
  }
  return g;
}

Eigen::VectorXd IntegralObservationModel::Eta(const Profile& x) const {
  const auto segs = Segments(starts_, ends_, deviators_);
  Eigen::VectorXd e(steps());
  for (int k = 0; k < steps(); ++k) e[k] = EtaEntry(segs[k], x, h_);
  return e;
}

GaussianBelief IntegralObservationModel::Posterior(
    const GaussianBelief& prior, const Eigen::MatrixXd& cross) const {
  if (steps() == 0) return prior;
  GaussianBelief post;
  post.mean = prior.mean + cross.transpose() * alpha_;
  const Eigen::MatrixXd v = llt_.matrixL().solve(cross);
  post.cov = prior.cov - v.transpose() * v;
  post.cov = 0.5 * (post.cov + post.cov.transpose());
  return post;
}

GaussianBelief IntegralObservationModel::PosteriorGradient(
    const Profile& x) const {
  const int dim = h_.dim();
  if (x.size() != dim) throw InvalidArgument("query has wrong dimension");
  GaussianBelief prior(Eigen::VectorXd::Zero(dim), Eigen::MatrixXd(dim, dim));
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) prior.cov(i, j) = SeKernelHess(i, j, x, x, h_);
  }
  return Posterior(prior, Gamma(x));
}

namespace {

// Prior over (Phi(xbar), Phi(x), g(xbar), g(x)) with g = dPhi/dx_i.
GaussianBelief ValueGradPrior(const Profile& x, const Profile& xbar, int i,
                              const GpHyperparams& h) {
  const Profile* pts[2] = {&xbar, &x};
  GaussianBelief prior(Eigen::VectorXd::Zero(4), Eigen::MatrixXd(4, 4));
  prior.mean[0] = prior.mean[1] = h.prior_mean;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      prior.cov(a, b) = SeKernel(*pts[a], *pts[b], h);
      // cov(Phi(p_a), dPhi(p_b)/dx_i)
      prior.cov(a, 2 + b) = SeKernelGrad(i, *pts[a], *pts[b], h);
      prior.cov(2 + b, a) = prior.cov(a, 2 + b);
      prior.cov(2 + a, 2 + b) = SeKernelHess(i, i, *pts[a], *pts[b], h);
    }
  }
  return prior;
}

}  // namespace

GaussianBelief IntegralObservationModel::JointValueGrad(const Profile& x,
                                                        const Profile& xbar,
                                                        int i) const {
  if (i < 0 || i >= h_.dim()) throw InvalidArgument("player index out of range");
  const GaussianBelief prior = ValueGradPrior(x, xbar, i, h_);
  Eigen::MatrixXd cross(steps(), 4);
  if (steps() > 0) {
    cross.col(0) = Eta(xbar);
    cross.col(1) = Eta(x);
    cross.col(2) = Gamma(xbar).col(i);
    cross.col(3) = Gamma(x).col(i);
  }
  return Posterior(prior, cross);
}

GaussianBelief IntegralObservationModel::JointValueGradPrior(
    const Profile& x, const Profile& xbar, int i) const {
  const int m = steps();
  const GaussianBelief top = ValueGradPrior(x, xbar, i, h_);
  GaussianBelief joint(Eigen::VectorXd::Zero(4 + m),
                       Eigen::MatrixXd::Zero(4 + m, 4 + m));
  joint.mean.head(4) = top.mean;
  joint.cov.topLeftCorner(4, 4) = top.cov;
  if (m > 0) {
    Eigen::MatrixXd cross(m, 4);
    cross.col(0) = Eta(xbar);
    cross.col(1) = Eta(x);
    cross.col(2) = Gamma(xbar).col(i);
    cross.col(3) = Gamma(x).col(i);
    joint.cov.bottomLeftCorner(m, 4) = cross;
    joint.cov.topRightCorner(4, m) = cross.transpose();
    joint.cov.bottomRightCorner(m, m) = pi_;
  }
  return joint;
}

GaussianBelief PosteriorGradient(const PathHistory& path, const Profile& query,
                                 const GpHyperparams& h,
                                 int quadrature_order) {
  return IntegralObservationModel(path, h, quadrature_order)
      .PosteriorGradient(query);
}

GaussianBelief JointValueGradPosterior(const Profile& x, const Profile& xbar,
                                       int i, const PathHistory& path,
                                       const GpHyperparams& h,
                                       int quadrature_order) {
  return IntegralObservationModel(path, h, quadrature_order)
      .JointValueGrad(x, xbar, i);
}

int AscentSign(const GaussianBelief& gradient_posterior, int i) {
  if (i < 0 || i >= gradient_posterior.dim()) {
    throw InvalidArgument("player index out of range");
  }
  return gradient_posterior.mean[i] >= 0.0 ? 1 : -1;
}

Eigen::VectorXd AscentDirection(const GaussianBelief& gradient_posterior,
                                int i) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(gradient_posterior.dim());
  p[i] = AscentSign(gradient_posterior, i);
  return p;
}

double WolfeProbability(const GaussianBelief& joint, double delta, int sign,
                        const LineSearchParams& params) {
  if (joint.dim() != 4) throw InvalidArgument("Wolfe joint must be 4-D");
  const double s = sign >= 0 ? 1.0 : -1.0;
  Eigen::MatrixXd map(2, 4);
  map << 1.0, -1.0, 0.0, -params.c1 * delta * s,  //
      0.0, 0.0, -s, params.c2 * s;
  return OrthantProbability(joint.Map(map));
}

double ImprovementEi(const GaussianBelief& joint) {
  const double mu = joint.mean[0] - joint.mean[1];
  const double var =
      joint.cov(0, 0) + joint.cov(1, 1) - 2.0 * joint.cov(0, 1);
  return ExpectedPositivePart(mu, std::sqrt(std::max(var, 0.0)));
}

LineSearchResult BacktrackingLineSearch(int player,
                                        const IntegralObservationModel& model,
                                        const Profile& x, int sign,
                                        const ActionSet& action_set,
                                        const LineSearchParams& params) {
  LineSearchResult res;
  res.player = player;
  res.sign = sign >= 0 ? 1 : -1;
  double delta = params.max_step;
  for (int t = 0; t < params.max_backtracks; ++t, delta *= params.backtrack_factor) {
    Profile xbar = x;
    const double target = x[player] + res.sign * delta;
    xbar[player] = action_set.Clip(target);
    const double eff = std::abs(xbar[player] - x[player]);
    if (eff == 0.0) break;
    ++res.trials;
    GaussianBelief joint = model.JointValueGrad(x, xbar, player);
    const double pw = WolfeProbability(joint, eff, res.sign, params);
    res.delta = delta;
    res.effective_delta = eff;
    res.p_w = pw;
    res.clipped = xbar[player] != target;
    res.candidate = std::move(xbar);
    res.joint = std::move(joint);
    if (pw >= params.wolfe_threshold) {
      res.accepted = true;
      return res;
    }
  }
  return res;
}

PlayerChoice SelectPlayer(std::span<const LineSearchResult> results) {
  PlayerChoice best;
  for (int r = 0; r < static_cast<int>(results.size()); ++r) {
    if (!results[r].accepted) continue;
    const double ei = ImprovementEi(results[r].joint);
    if (best.index < 0 || ei > best.ei) best = {r, ei};
  }
  return best;
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

SolveTrace SolveInfinite(const GameOracle& game,
                         const InfiniteSolverConfig& config, Rng& rng) {
  if (!game.all_intervals()) {
    throw InvalidArgument("continuous solver needs interval action sets");
  }
  const int n = game.player_count();
  config.Validate(n);

  SolveTrace trace;
  trace.solver = "infinite";
  int step = 0;

  Profile x(n);
  if (config.start) {
    x = *config.start;
    for (int i = 0; i < n; ++i) {
      if (!game.action_set(i).Contains(x[i])) {
        throw InvalidArgument("start profile outside player " +
                              std::to_string(i) + "'s interval");
      }
    }
  } else {
    for (int i = 0; i < n; ++i) {
      const ActionSet& s = game.action_set(i);
      std::uniform_real_distribution<double> pick(s.lo(), s.hi());
      x[i] = pick(rng);
    }
  }

  auto measure_and_record = [&](const Profile& at, TraceRow row) {
    const Eigen::VectorXd y = Measure(game, at, rng, step);
    ++trace.oracle_calls;
    if (trace.path.empty()) {
      trace.path.Start(at, y);
    } else {
      trace.path.Append(at, y);
      row.deviator = trace.path.deviators().back();
      row.delta_y = trace.path.delta_y()[trace.path.steps() - 1];
    }
    row.step = step++;
    row.profile = at;
    trace.rows.push_back(std::move(row));
  };

  TraceRow init;
  init.phase = "init";
  measure_and_record(x, init);

  // Cold start: one short probe per player so the first gradient posterior
  // is informed by data.
  const double probe = config.warmup_fraction * config.line_search.max_step;
  for (int i = 0; i < n; ++i) {
    const ActionSet& s = game.action_set(i);
    Profile next = x;
    next[i] = x[i] + probe <= s.hi() ? x[i] + probe : x[i] - probe;
    next[i] = s.Clip(next[i]);
    if (next[i] == x[i]) continue;
    TraceRow row;
    row.phase = "warmup";
    row.delta = std::abs(next[i] - x[i]);
    measure_and_record(next, row);
    x = next;
  }

  trace.stop = StopReason::kMaxIterations;
  for (int it = 0; it < config.max_iterations; ++it) {
    const IntegralObservationModel model(trace.path, config.hyperparams,
                                         config.quadrature_order,
                                         config.correlated_noise);
    const GaussianBelief grad = model.PosteriorGradient(x);
    std::vector<LineSearchResult> results;
    for (int i = 0; i < n; ++i) {
      results.push_back(BacktrackingLineSearch(i, model, x, AscentSign(grad, i),
                                               game.action_set(i),
                                               config.line_search));
    }
    const PlayerChoice choice = SelectPlayer(results);
    if (choice.index < 0) {
      trace.stop = StopReason::kLineSearchStalled;
      trace.final_ei = 0.0;
      break;
    }
    trace.final_ei = choice.ei;
    if (choice.ei < config.ei_termination) {
      trace.stop = StopReason::kEiBelowThreshold;
      break;
    }
    const LineSearchResult& chosen = results[choice.index];
    TraceRow row;
    row.phase = "search";
    row.ei = choice.ei;
    row.delta = chosen.delta;
    row.p_w = chosen.p_w;
    row.clipped = chosen.clipped;
    measure_and_record(chosen.candidate, row);
    x = chosen.candidate;
    ++trace.iterations;
  }
  trace.final_profile = x;
  return trace;
}

}  // namespace pgbo
