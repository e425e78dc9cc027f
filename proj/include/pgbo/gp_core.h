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

#ifndef PGBO_GP_CORE_H_
#define PGBO_GP_CORE_H_

// Squared-exponential kernel algebra and Gaussian conditioning shared by the
// finite and continuous-action solvers.
//
// Derivative convention. For the SE kernel k(x, xb):
//   SeKernelGrad(i, x, xb)     = d k / d xb_i          = cov[f(x), df(xb)/dxb_i]
//   SeKernelHess(i, j, x, xb)  = d^2 k / dx_i dxb_j    = cov[df(x)/dx_i, df(xb)/dxb_j]
// Every covariance block built elsewhere in the library follows this.

#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace pgbo {

using Rng = std::mt19937_64;

struct GpHyperparams {
  // Kernel amplitude; prior variance of the latent function is the square.
  double output_scale = 1.0;
  // One input length scale per action dimension.
  Eigen::VectorXd length_scales;
  // Variance of the additive noise on each individual utility measurement.
  double noise_variance = 0.0;
  // Initial diagonal regularizer, relative to output_scale^2.
  double jitter = 1e-10;
  // Constant prior mean of the latent potential.
  double prior_mean = 0.0;

  int dim() const { return static_cast<int>(length_scales.size()); }
  double signal_variance() const { return output_scale * output_scale; }
  void Validate() const;

  // Isotropic hyperparameters with every length scale equal to `length_scale`.
  static GpHyperparams Isotropic(int dim, double length_scale,
                                 double output_scale = 1.0,
                                 double noise_variance = 0.0);
};

// Jitter schedule used when a covariance block fails to factorize: start at
// `initial`, multiply by `factor`, give up above `max`.
struct JitterPolicy {
  double initial = 1e-10;
  double max = 1e-4;
  double factor = 10.0;

  static JitterPolicy ForHyperparams(const GpHyperparams& h);
};

struct GaussianBelief {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;

  GaussianBelief() = default;
  GaussianBelief(Eigen::VectorXd m, Eigen::MatrixXd c)
      : mean(std::move(m)), cov(std::move(c)) {}

  int dim() const { return static_cast<int>(mean.size()); }
  // Throws InvalidArgument on shape mismatch or asymmetry beyond 1e-10.
  void Validate() const;
  GaussianBelief Marginal(std::span<const int> indices) const;
  // Distribution of map * X.
  GaussianBelief Map(const Eigen::MatrixXd& map) const;
};

double SeKernel(const Eigen::Ref<const Eigen::VectorXd>& x,
                const Eigen::Ref<const Eigen::VectorXd>& xb,
                const GpHyperparams& h);

double SeKernelGrad(int i, const Eigen::Ref<const Eigen::VectorXd>& x,
                    const Eigen::Ref<const Eigen::VectorXd>& xb,
                    const GpHyperparams& h);

double SeKernelHess(int i, int j, const Eigen::Ref<const Eigen::VectorXd>& x,
                    const Eigen::Ref<const Eigen::VectorXd>& xb,
                    const GpHyperparams& h);

// Gram matrix K(m, n) = SeKernel(points[m], points[n]).
Eigen::MatrixXd SeGram(std::span<const Eigen::VectorXd> points,
                       const GpHyperparams& h);

// Exact Gaussian conditional of the components of `joint` not listed in
// `observed` given noisy observations y = X[observed] + e, e ~ N(0, noise_cov).
// The returned belief keeps the unobserved components in their original order.
// An empty observation set returns the prior unchanged.
GaussianBelief Condition(const GaussianBelief& joint,
                         std::span<const int> observed,
                         const Eigen::VectorXd& observations,
                         const Eigen::MatrixXd& noise_cov,
                         const JitterPolicy& jitter = {});

// Cholesky factor of `a` with the jitter schedule applied on failure. Throws
// NumericalError with diagnostics once the schedule is exhausted.
Eigen::LLT<Eigen::MatrixXd> FactorizeWithJitter(const Eigen::MatrixXd& a,
                                                const JitterPolicy& jitter);

// Standard normal CDF and density.
double NormalCdf(double z);
double NormalPdf(double z);

// E[max(Z, 0)] for Z ~ N(mu, sigma^2). sigma == 0 gives max(mu, 0).
double ExpectedPositivePart(double mu, double sigma);

// P(X_0 >= 0 and X_1 >= 0) for a bivariate Gaussian. Rank-deficient
// covariances are handled exactly by reduction to one dimension or a point
// mass.
double OrthantProbability(const GaussianBelief& belief);

}  // namespace pgbo

#endif  // PGBO_GP_CORE_H_
