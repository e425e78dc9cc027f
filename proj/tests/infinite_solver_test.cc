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
#include <functional>
#include <cmath>
#include <random>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doctest.h"
#include "pgbo/errors.h"
#include "pgbo/quadrature.h"

namespace pgbo {
namespace {

GpHyperparams CournotHyper(double noise_var = 0.0) {
  return GpHyperparams::Isotropic(2, std::sqrt(std::sqrt(30.0)), 1.0,
                                  noise_var);
}

// Random axis-aligned path in [0, 10]^2 with potential-free utilities.
PathHistory RandomPath(int steps, Rng& rng, double span = 10.0) {
  std::uniform_real_distribution<double> u(0.0, span);
  PathHistory path;
  Profile x = Eigen::Vector2d(u(rng), u(rng));
  path.Start(x, Eigen::Vector2d::Zero());
  for (int k = 0; k < steps; ++k) {
    Profile next = x;
    const int i = k % 2;
    do {
      next[i] = u(rng);
    } while (std::abs(next[i] - x[i]) < 0.05);
    path.Append(next, Eigen::Vector2d::Zero());
    x = next;
  }
  return path;
}

double RelErr(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// Identical-interest game: every player receives the potential.
FunctionGame IdenticalInterest(std::function<double(const Profile&)> phi,
                               double lo, double hi, double noise = 0.0) {
  return FunctionGame(
      {ActionSet::Interval(lo, hi), ActionSet::Interval(lo, hi)}, noise,
      [phi](const Profile& x) {
        const double v = phi(x);
        return Eigen::Vector2d(v, v);
      });
}

double Bowl(const Profile& x) {
  return -(x[0] - 1) * (x[0] - 1) - (x[1] - 2) * (x[1] - 2);
}

TEST_CASE("Gauss-Legendre rule on the unit interval") {
  for (int order : {2, 5, 16}) {
    const GaussLegendreRule r = GaussLegendreUnit(order);
    REQUIRE(r.order() == order);
    for (int p = 0; p < 2 * order; ++p) {
      double acc = 0.0;
      for (int q = 0; q < order; ++q) acc += r.weights[q] * std::pow(r.nodes[q], p);
      CHECK(acc == doctest::Approx(1.0 / (p + 1)).epsilon(1e-13));
    }
  }
}

// Midpoint sum over n cells with the leading Euler-Maclaurin end correction
// h^2/24 (f'(hi) - f'(lo)); the cancellation in small entries needs it.
double CorrectedMidpoint(const std::function<double(double)>& f, double lo,
                         double hi, int n) {
  const double h = (hi - lo) / n;
  double acc = 0.0;
  for (int j = 0; j < n; ++j) acc += f(lo + (j + 0.5) * h);
  const double e = 1e-4;
  auto df = [&](double t) { return (f(t + e) - f(t - e)) / (2 * e); };
  return h * acc + h * h / 24.0 * (df(hi) - df(lo));
}

TEST_CASE("gamma and eta match Riemann sums") {
  Rng rng(21);
  const GpHyperparams h = CournotHyper();
  const int n = 10000;
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const PathHistory path = RandomPath(3, rng, 6.0);
    std::uniform_real_distribution<double> u(0.0, 6.0);
    const Profile q = Eigen::Vector2d(u(rng), u(rng));
    const IntegralCovBlocks b = ComputeIntegralCovBlocks(
        path, std::vector<Profile>{q}, h);
    for (int k = 1; k <= path.steps(); ++k) {
      const int d = path.deviator(k);
      const Profile& a = path.profile(k - 1);
      const double lo = a[d], hi = path.profile(k)[d];
      auto at = [&](double v) {
        Profile r = a;
        r[d] = v;
        return r;
      };
      const double eta = CorrectedMidpoint(
          [&](double v) { return SeKernelGrad(d, q, at(v), h); }, lo, hi, n);
      worst = std::max(worst, RelErr(b.eta(k - 1, 0), eta));
      for (int i = 0; i < 2; ++i) {
        const double gamma = CorrectedMidpoint(
            [&](double v) { return SeKernelHess(d, i, at(v), q, h); }, lo, hi,
            n);
        worst = std::max(worst, RelErr(b.gamma(k - 1, i), gamma));
      }
    }
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("pi matches a 100 x 100 Riemann sum") {
  Rng rng(22);
  const GpHyperparams h = CournotHyper();
  const int n = 100;
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const PathHistory path = RandomPath(3, rng, 6.0);
    const IntegralCovBlocks b =
        ComputeIntegralCovBlocks(path, std::vector<Profile>{}, h, 16);
    for (int k = 1; k <= 3; ++k) {
      for (int l = 1; l <= 3; ++l) {
        const int dk = path.deviator(k), dl = path.deviator(l);
        const Profile& ak = path.profile(k - 1);
        const Profile& al = path.profile(l - 1);
        const double xk = path.profile(k)[dk] - ak[dk];
        const double xl = path.profile(l)[dl] - al[dl];
        Profile rk = ak, rl = al;
        double acc = 0.0;
        for (int s = 0; s < n; ++s) {
          rk[dk] = ak[dk] + (s + 0.5) / n * xk;
          for (int t = 0; t < n; ++t) {
            rl[dl] = al[dl] + (t + 0.5) / n * xl;
            acc += SeKernelHess(dk, dl, rk, rl, h);
          }
        }
        acc *= xk * xl / (n * n);
        worst = std::max(worst, RelErr(b.pi(k - 1, l - 1), acc));
      }
    }
  }
  CHECK(worst <= 1e-4);
}

TEST_CASE("pi is stable under doubling the quadrature order") {
  Rng rng(23);
  const GpHyperparams h = CournotHyper();
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const PathHistory path = RandomPath(6, rng);
    const Eigen::MatrixXd p16 =
        ComputeIntegralCovBlocks(path, std::vector<Profile>{}, h, 16).pi;
    const Eigen::MatrixXd p32 =
        ComputeIntegralCovBlocks(path, std::vector<Profile>{}, h, 32).pi;
    for (int i = 0; i < p16.rows(); ++i) {
      for (int j = 0; j < p16.cols(); ++j) {
        worst = std::max(worst, RelErr(p16(i, j), p32(i, j)));
      }
    }
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("integral blocks: vanishing segments and positive diagonal") {
  const GpHyperparams h = CournotHyper();
  const Profile q = Eigen::Vector2d(3.0, 4.0);
  double prev = 1e300;
  for (double dx : {1e-1, 1e-3, 1e-5}) {
    PathHistory path;
    path.Start(Eigen::Vector2d(2.0, 2.0), Eigen::Vector2d::Zero());
    path.Append(Eigen::Vector2d(2.0 + dx, 2.0), Eigen::Vector2d::Zero());
    const IntegralCovBlocks b =
        ComputeIntegralCovBlocks(path, std::vector<Profile>{q}, h);
    const double g = std::abs(b.gamma(0, 1));
    // gamma ~ dx * kappa^(D,D) at the segment start.
    const double lead =
        dx * SeKernelHess(0, 1, Eigen::Vector2d(2.0, 2.0), q, h);
    CHECK(RelErr(b.gamma(0, 1), lead) <= 2 * dx);
    CHECK(g < prev);
    prev = g;
    CHECK(b.pi(0, 0) > 0.0);
  }
  PathHistory bad;
  bad.Start(Eigen::Vector2d(2.0, 2.0), Eigen::Vector2d::Zero());
  CHECK_THROWS_AS(bad.Append(Eigen::Vector2d(2.0, 2.0), Eigen::Vector2d::Zero()),
                  InvalidArgument);
  CHECK_THROWS_AS(ComputeIntegralCovBlocks(bad, std::vector<Profile>{q}, h, 1),
                  InvalidArgument);
}

TEST_CASE("gradient posterior without observations is the prior") {
  GpHyperparams h = CournotHyper();
  h.length_scales = Eigen::Vector2d(2.0, 0.5);
  h.output_scale = 3.0;
  PathHistory path;
  path.Start(Eigen::Vector2d(1.0, 1.0), Eigen::Vector2d::Zero());
  const GaussianBelief g = PosteriorGradient(path, Eigen::Vector2d(4, 5), h);
  CHECK(g.mean.cwiseAbs().maxCoeff() == 0.0);
  CHECK(g.cov(0, 0) == doctest::Approx(9.0 / 4.0));
  CHECK(g.cov(1, 1) == doctest::Approx(9.0 / 0.25));
  CHECK(g.cov(0, 1) == 0.0);

  const IntegralObservationModel model(path, h);
  const GaussianBelief j = model.JointValueGrad(Eigen::Vector2d(4, 5),
                                                Eigen::Vector2d(4.5, 5), 0);
  CHECK(j.cov(0, 0) == doctest::Approx(9.0));
  CHECK(j.cov(1, 1) == doctest::Approx(9.0));
  CHECK(j.cov(2, 2) == doctest::Approx(9.0 / 4.0));
  CHECK(j.cov(3, 3) == doctest::Approx(9.0 / 4.0));
  // Value and gradient at the same point are uncorrelated.
  CHECK(j.cov(1, 3) == 0.0);
  CHECK(j.cov(0, 2) == 0.0);
}

TEST_CASE("conditioning shrinks the gradient variance") {
  Rng rng(24);
  const GpHyperparams h = CournotHyper(1e-6);
  for (int trial = 0; trial < 10; ++trial) {
    PathHistory path = RandomPath(6, rng);
    const IntegralObservationModel model(path, h);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    const Profile q = Eigen::Vector2d(u(rng), u(rng));
    const GaussianBelief g = model.PosteriorGradient(q);
    for (int i = 0; i < 2; ++i) {
      CHECK(g.cov(i, i) <= SeKernelHess(i, i, q, q, h) + 1e-14);
      CHECK(g.cov(i, i) >= -1e-12);
    }
  }
}

TEST_CASE("joint posterior agrees with generic conditioning") {
  Rng rng(25);
  const GpHyperparams h = CournotHyper(1e-4);
  double worst = 0.0;
  double worst_grad = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    PathHistory path;
    {
      // Random utilities so the posterior mean is nontrivial.
      std::normal_distribution<double> g(0.0, 1.0);
      const PathHistory shape = RandomPath(5, rng);
      path.Start(shape.profile(0), Eigen::Vector2d(g(rng), g(rng)));
      for (int k = 1; k <= shape.steps(); ++k) {
        path.Append(shape.profile(k), Eigen::Vector2d(g(rng), g(rng)));
      }
    }
    const IntegralObservationModel model(path, h);
    const Profile x = path.back();
    Profile xbar = x;
    const int i = trial % 2;
    xbar[i] = std::clamp(x[i] + 0.7, 0.0, 10.0);
    const GaussianBelief fast = model.JointValueGrad(x, xbar, i);
    const GaussianBelief prior = model.JointValueGradPrior(x, xbar, i);
    std::vector<int> observed;
    for (int k = 0; k < model.steps(); ++k) observed.push_back(4 + k);
    const GaussianBelief slow = Condition(prior, observed, model.observations(),
                                          model.noise());
    worst = std::max({worst, (fast.mean - slow.mean).cwiseAbs().maxCoeff(),
                      (fast.cov - slow.cov).cwiseAbs().maxCoeff()});
    const GaussianBelief grad = model.PosteriorGradient(x);
    worst_grad = std::max({worst_grad, std::abs(grad.mean[i] - fast.mean[3]),
                           std::abs(grad.cov(i, i) - fast.cov(3, 3))});
  }
  CHECK(worst <= 1e-10);
  CHECK(worst_grad <= 1e-10);
}

TEST_CASE("coincident endpoints give a degenerate improvement") {
  Rng rng(26);
  const GpHyperparams h = CournotHyper(1e-6);
  const IntegralObservationModel model(RandomPath(4, rng), h);
  const Profile x = Eigen::Vector2d(5.0, 5.0);
  double prev_var = 1e300;
  for (double d : {1e-2, 1e-4, 1e-6}) {
    Profile xbar = x;
    xbar[1] += d;
    const GaussianBelief j = model.JointValueGrad(x, xbar, 1);
    const double mu = j.mean[0] - j.mean[1];
    const double var = j.cov(0, 0) + j.cov(1, 1) - 2 * j.cov(0, 1);
    CHECK(std::abs(mu) <= 10 * d);
    CHECK(var <= prev_var);
    prev_var = var;
  }
  CHECK(prev_var <= 1e-10);
}

TEST_CASE("quadratic potential: gradient posterior tracks the truth") {
  auto phi = [](const Profile& x) {
    return -(x[0] - 1) * (x[0] - 1) - 0.5 * (x[1] - 2) * (x[1] - 2) +
           0.3 * x[0] * x[1];
  };
  auto grad = [](const Profile& x) {
    return Eigen::Vector2d(-2 * (x[0] - 1) + 0.3 * x[1],
                           -(x[1] - 2) + 0.3 * x[0]);
  };
  // Zig-zag path over [0, 3]^2.
  PathHistory path;
  Profile x = Eigen::Vector2d(0.2, 0.3);
  path.Start(x, Eigen::Vector2d::Constant(phi(x)));
  Rng rng(27);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int k = 0; k < 40; ++k) {
    x[k % 2] = u(rng);
    path.Append(x, Eigen::Vector2d::Constant(phi(x)));
  }
  const GpHyperparams h = GpHyperparams::Isotropic(2, 2.0, 5.0, 0.0);
  const IntegralObservationModel model(path, h);
  double worst = 0.0;
  for (int k = 5; k <= 35; ++k) {
    const Profile& q = path.profile(k);
    worst = std::max(
        worst, (model.PosteriorGradient(q).mean - grad(q)).cwiseAbs().maxCoeff());
  }
  CHECK(worst <= 1e-2);
}

TEST_CASE("GP-sampled potential: gradient error falls as the path grows") {
  // Random Fourier features approximate a draw from the SE prior.
  const GpHyperparams h = GpHyperparams::Isotropic(2, 1.5, 1.0, 0.0);
  const int features = 2000;
  Rng rng(28);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> ph(0.0, 2 * M_PI);
  Eigen::MatrixXd w(features, 2);
  Eigen::VectorXd b(features), c(features);
  for (int f = 0; f < features; ++f) {
    w(f, 0) = g(rng) / 1.5;
    w(f, 1) = g(rng) / 1.5;
    b[f] = ph(rng);
    c[f] = g(rng);
  }
  const double scale = std::sqrt(2.0 / features);
  auto phi = [&](const Profile& x) {
    return scale * c.dot((w * x + b).array().cos().matrix());
  };
  auto grad = [&](const Profile& x) {
    const Eigen::VectorXd s = -(w * x + b).array().sin();
    return Eigen::Vector2d(scale * w.transpose() * c.cwiseProduct(s));
  };

  std::uniform_real_distribution<double> u(0.0, 5.0);
  PathHistory path;
  Profile x = Eigen::Vector2d(u(rng), u(rng));
  path.Start(x, Eigen::Vector2d::Constant(phi(x)));
  std::vector<double> medians;
  for (int checkpoint : {6, 18, 48}) {
    while (path.steps() < checkpoint) {
      const int i = path.steps() % 2;
      do {
        x[i] = u(rng);
      } while (std::abs(x[i] - path.back()[i]) < 0.05);
      path.Append(x, Eigen::Vector2d::Constant(phi(x)));
    }
    const IntegralObservationModel model(path, h);
    std::vector<double> err;
    for (int k = 0; k <= 6; ++k) {
      const Profile& q = path.profile(k);
      const Eigen::VectorXd e = model.PosteriorGradient(q).mean - grad(q);
      err.push_back(std::abs(e[0]));
      err.push_back(std::abs(e[1]));
    }
    std::nth_element(err.begin(), err.begin() + err.size() / 2, err.end());
    medians.push_back(err[err.size() / 2]);
  }
  CHECK(medians[1] < medians[0]);
  CHECK(medians[2] < medians[1]);
}

TEST_CASE("ascent sign") {
  GaussianBelief g(Eigen::Vector2d(2.3, -1.0), Eigen::Matrix2d::Identity());
  CHECK(AscentSign(g, 0) == 1);
  CHECK(AscentSign(g, 1) == -1);
  CHECK(AscentDirection(g, 1) == Eigen::Vector2d(0, -1));
  g.mean = Eigen::Vector2d(0.0, 0.0);
  CHECK(AscentSign(g, 0) == 1);
  CHECK(AscentDirection(g, 0) == Eigen::Vector2d(1, 0));
  CHECK_THROWS_AS(AscentSign(g, 2), InvalidArgument);
}

GaussianBelief PointMass(double phibar, double phi, double dbar, double d) {
  return GaussianBelief(Eigen::Vector4d(phibar, phi, dbar, d),
                        Eigen::Matrix4d::Zero());
}

TEST_CASE("Wolfe probability of point masses") {
  const LineSearchParams p;
  // Increase 1 with slope 2 -> 1 at delta 0.5: both conditions hold.
  CHECK(WolfeProbability(PointMass(2.0, 1.0, 1.0, 2.0), 0.5, 1, p) == 1.0);
  // No increase.
  CHECK(WolfeProbability(PointMass(1.0, 1.0, 1.0, 2.0), 0.5, 1, p) == 0.0);
  // Curvature violated: slope barely decreased.
  CHECK(WolfeProbability(PointMass(2.0, 1.0, 1.9, 2.0), 0.5, 1, p) == 0.0);
  // Descent along -e_i: negative slopes mean ascent.
  CHECK(WolfeProbability(PointMass(2.0, 1.0, -1.0, -2.0), 0.5, -1, p) == 1.0);
  CHECK(WolfeProbability(PointMass(2.0, 1.0, 1.0, 2.0), 0.5, -1, p) == 0.0);
}

TEST_CASE("Wolfe probability matches Monte Carlo") {
  Rng rng(29);
  std::normal_distribution<double> g(0.0, 1.0);
  const LineSearchParams p;
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::Matrix4d a;
    for (int i = 0; i < 16; ++i) a(i / 4, i % 4) = g(rng);
    const Eigen::Matrix4d cov = a * a.transpose() + 0.1 * Eigen::Matrix4d::Identity();
    const Eigen::Vector4d mean(g(rng), g(rng), g(rng), g(rng));
    const int sign = trial % 2 ? -1 : 1;
    const double delta = 0.3 + 0.2 * trial;
    const double pw = WolfeProbability(GaussianBelief(mean, cov), delta, sign, p);
    const Eigen::Matrix4d l = cov.llt().matrixL();
    const int n = 1000000;
    int hits = 0;
    for (int s = 0; s < n; ++s) {
      const Eigen::Vector4d v =
          mean + l * Eigen::Vector4d(g(rng), g(rng), g(rng), g(rng));
      const double a1 = v[0] - v[1] - p.c1 * delta * sign * v[3];
      const double b1 = p.c2 * sign * v[3] - sign * v[2];
      hits += a1 >= 0 && b1 >= 0;
    }
    CHECK(std::abs(pw - static_cast<double>(hits) / n) <= 0.005);
  }
}

// Model of a concave 1-D bowl in x_0 seen through a dense noiseless path.
IntegralObservationModel BowlModel() {
  PathHistory path;
  Profile x = Eigen::Vector2d(0.0, 2.0);
  path.Start(x, Eigen::Vector2d::Constant(Bowl(x)));
  for (int k = 1; k <= 30; ++k) {
    x[0] = 0.1 * k;
    path.Append(x, Eigen::Vector2d::Constant(Bowl(x)));
  }
  return IntegralObservationModel(
      path, GpHyperparams::Isotropic(2, 1.5, 3.0, 1e-10));
}

TEST_CASE("line search: accept, vacuous threshold and rejection") {
  const IntegralObservationModel model = BowlModel();
  const ActionSet box = ActionSet::Interval(0.0, 3.0);
  LineSearchParams p;
  p.max_step = 0.5;
  // From x0 = 0 the full step to 0.5 is a clear Wolfe step for -(x-1)^2.
  const LineSearchResult first =
      BacktrackingLineSearch(0, model, Eigen::Vector2d(0.0, 2.0), 1, box, p);
  CHECK(first.accepted);
  CHECK(first.trials == 1);
  CHECK(first.delta == 0.5);
  CHECK(first.p_w >= p.wolfe_threshold);

  LineSearchParams vac = p;
  vac.wolfe_threshold = 0.0;
  vac.max_step = 1.7;
  const LineSearchResult any =
      BacktrackingLineSearch(0, model, Eigen::Vector2d(1.0, 2.0), 1, box, vac);
  CHECK(any.accepted);
  CHECK(any.trials == 1);
  CHECK(any.delta == 1.7);

  // Ascent is impossible at the maximum: every trial rejected.
  LineSearchParams strict = p;
  strict.max_backtracks = 12;
  const LineSearchResult none = BacktrackingLineSearch(
      0, model, Eigen::Vector2d(1.0, 2.0), 1, box, strict);
  CHECK_FALSE(none.accepted);
  CHECK(none.trials == 12);
}

TEST_CASE("line search: accepted steps satisfy the deterministic Wolfe test") {
  const IntegralObservationModel model = BowlModel();
  const ActionSet box = ActionSet::Interval(0.0, 3.0);
  const LineSearchParams p;  // max_step 1, beta 0.75
  auto f = [](double t) { return -(t - 1) * (t - 1); };
  auto df = [](double t) { return -2 * (t - 1); };
  for (double x0 : {0.0, 0.2, 0.4, 0.6, 2.0, 2.5}) {
    const int sign = x0 < 1.0 ? 1 : -1;
    const LineSearchResult r = BacktrackingLineSearch(
        0, model, Eigen::Vector2d(x0, 2.0), sign, box, p);
    REQUIRE(r.accepted);
    const double xb = r.candidate[0];
    const double d = r.effective_delta;
    CHECK(f(xb) - f(x0) >= p.c1 * d * sign * df(x0));
    CHECK(sign * df(xb) <= p.c2 * sign * df(x0));
  }
}

TEST_CASE("line search clips at the interval boundary") {
  const IntegralObservationModel model = BowlModel();
  const ActionSet box = ActionSet::Interval(0.0, 3.0);
  LineSearchParams p;
  p.wolfe_threshold = 0.0;
  const LineSearchResult r = BacktrackingLineSearch(
      0, model, Eigen::Vector2d(0.4, 2.0), -1, box, p);
  CHECK(r.accepted);
  CHECK(r.clipped);
  CHECK(r.candidate[0] == 0.0);
  CHECK(r.effective_delta == doctest::Approx(0.4));
  CHECK(r.delta == 1.0);
  // Already on the boundary: no trial is possible.
  const LineSearchResult stuck = BacktrackingLineSearch(
      0, model, Eigen::Vector2d(0.0, 2.0), -1, box, p);
  CHECK_FALSE(stuck.accepted);
  CHECK(stuck.trials == 0);
}

TEST_CASE("player selection") {
  LineSearchResult a, b;
  a.accepted = b.accepted = true;
  a.joint = PointMass(2.0, 0.0, 0.0, 0.0);
  b.joint = PointMass(1.0, 0.0, 0.0, 0.0);
  std::vector<LineSearchResult> two{a, b};
  PlayerChoice c = SelectPlayer(two);
  CHECK(c.index == 0);
  CHECK(c.ei == 2.0);

  two[0].accepted = false;
  c = SelectPlayer(two);
  CHECK(c.index == 1);
  CHECK(c.ei == 1.0);

  two[1].accepted = false;
  CHECK(SelectPlayer(two).index == -1);

  // Ties go to the lower index.
  std::vector<LineSearchResult> tie{b, b};
  CHECK(SelectPlayer(tie).index == 0);

  // EI is the expected positive part of the difference.
  Eigen::Matrix4d cov = Eigen::Matrix4d::Identity();
  cov(0, 1) = cov(1, 0) = 0.25;
  LineSearchResult r;
  r.accepted = true;
  r.joint = GaussianBelief(Eigen::Vector4d(0.3, 0.5, 0, 0), cov);
  std::vector<LineSearchResult> one{r};
  CHECK(SelectPlayer(one).ei ==
        doctest::Approx(ExpectedPositivePart(-0.2, std::sqrt(1.5))));
}

TEST_CASE("noiseless utility differences are path integrals of the gradient") {
  const CournotParams cp;
  const CournotGame game = CournotGame::Continuous(cp, 1e-3, 0.0);
  auto dphi = [&](const Profile& q, int i) {
    return cp.a - cp.b * (q.sum() + q[i]) -
           cp.d[i] * cp.beta[i] * std::pow(q[i], cp.beta[i] - 1.0);
  };
  InfiniteSolverConfig c;
  c.hyperparams = CournotHyper();
  c.start = Eigen::Vector2d(2.0, 2.0);
  Rng rng(30);
  const SolveTrace t = SolveInfinite(game, c, rng);
  double worst = 0.0;
  for (int k = 1; k <= t.path.steps(); ++k) {
    const int i = t.path.deviator(k);
    const Profile a = t.path.profile(k - 1);
    const double lo = a[i], hi = t.path.profile(k)[i];
    auto integrand = [&](double v) {
      Profile r = a;
      r[i] = v;
      return dphi(r, i);
    };
    const double ref =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            integrand, lo, hi, 15, 1e-15);
    worst = std::max(worst, std::abs(t.path.delta_y()[k - 1] - ref));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("starting at the maximum of a bowl stops quickly") {
  const FunctionGame game = IdenticalInterest(Bowl, 0.0, 3.0);
  InfiniteSolverConfig c;
  c.hyperparams = GpHyperparams::Isotropic(2, 1.0, 1.0, 0.0);
  c.start = Eigen::Vector2d(1.0, 2.0);
  Rng rng(31);
  const SolveTrace t = SolveInfinite(game, c, rng);
  CHECK(t.stop == StopReason::kEiBelowThreshold);
  // The warmup probes leave the maximum; the search has to walk back.
  CHECK(t.iterations <= 12);
  CHECK(t.final_ei < c.ei_termination);
  CHECK((t.final_profile - Eigen::Vector2d(1.0, 2.0)).cwiseAbs().maxCoeff() <=
        0.1);
}

TEST_CASE("solver trace invariants") {
  const CournotGame game = CournotGame::Continuous(CournotParams{}, 1e-3, 1e-3);
  InfiniteSolverConfig c;
  c.hyperparams = CournotHyper(1e-6);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(seed);
    const SolveTrace t = SolveInfinite(game, c, rng);
    CHECK(t.oracle_calls == static_cast<int>(t.rows.size()));
    for (std::size_t k = 1; k < t.rows.size(); ++k) {
      const TraceRow& r = t.rows[k];
      const int d = UniqueDeviator(t.rows[k - 1].profile, r.profile);
      REQUIRE(d >= 0);
      CHECK(r.deviator == d);
      const double moved = std::abs(r.profile[d] - t.rows[k - 1].profile[d]);
      if (r.clipped) {
        CHECK(moved < r.delta);
      } else {
        CHECK(moved == doctest::Approx(r.delta).epsilon(1e-12));
      }
      if (r.phase == "search") {
        CHECK(r.ei >= 0.0);
        CHECK(r.p_w >= c.line_search.wolfe_threshold);
        // Nominal steps are max_step * beta^t.
        const double t_exp = std::log(r.delta / c.line_search.max_step) /
                             std::log(c.line_search.backtrack_factor);
        CHECK(std::abs(t_exp - std::round(t_exp)) <= 1e-9);
      }
    }
    if (t.stop == StopReason::kEiBelowThreshold) {
      CHECK(t.final_ei < c.ei_termination);
    }
  }
}

TEST_CASE("identical seeds give identical traces") {
  const CournotGame game = CournotGame::Continuous(CournotParams{}, 1e-3, 1e-3);
  InfiniteSolverConfig c;
  c.hyperparams = CournotHyper(1e-6);
  Rng r1(32), r2(32);
  std::ostringstream a, b;
  WriteTraceCsv(SolveInfinite(game, c, r1), a);
  WriteTraceCsv(SolveInfinite(game, c, r2), b);
  CHECK(a.str() == b.str());
}

TEST_CASE("configuration checks") {
  const CournotGame grid = CournotGame::Grid(CournotParams{}, 1e-3, 31, 0.0);
  InfiniteSolverConfig c;
  c.hyperparams = CournotHyper();
  Rng rng(33);
  CHECK_THROWS_AS(SolveInfinite(grid, c, rng), InvalidArgument);
  const CournotGame cont = CournotGame::Continuous(CournotParams{}, 1e-3, 0.0);
  c.line_search.c1 = 0.9;
  CHECK_THROWS_AS(SolveInfinite(cont, c, rng), InvalidArgument);
  c = InfiniteSolverConfig{};
  c.hyperparams = CournotHyper();
  c.line_search.backtrack_factor = 1.0;
  CHECK_THROWS_AS(SolveInfinite(cont, c, rng), InvalidArgument);
  c = InfiniteSolverConfig{};
  c.hyperparams = CournotHyper();
  c.start = Eigen::Vector2d(11.0, 1.0);
  CHECK_THROWS_AS(SolveInfinite(cont, c, rng), InvalidArgument);
}

}  // namespace
}  // namespace pgbo
