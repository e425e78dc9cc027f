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

#include "pgbo/gp_core.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "pgbo/errors.h"

namespace pgbo {
namespace {

void CheckDims(const Eigen::Ref<const Eigen::VectorXd>& x,
               const Eigen::Ref<const Eigen::VectorXd>& xb,
               const GpHyperparams& h) {
  if (x.size() != h.length_scales.size() ||
      xb.size() != h.length_scales.size()) {
    std::ostringstream msg;
    msg << "kernel input dimension mismatch: x has " << x.size()
        << ", xb has " << xb.size() << ", hyperparameters have "
        << h.length_scales.size();
    throw InvalidArgument(msg.str());
  }
}

void CheckIndex(int i, const GpHyperparams& h) {
  if (i < 0 || i >= h.dim()) {
    throw InvalidArgument("derivative index " + std::to_string(i) +
                          " out of range [0, " + std::to_string(h.dim()) +
                          ")");
  }
}

// Integration window for standard-normal integrands; phi(10) ~ 7.7e-23.
constexpr double kNormalTail = 10.0;

}  // namespace

void GpHyperparams::Validate() const {
  if (!(output_scale > 0.0)) {
    throw InvalidArgument("output_scale must be > 0");
  }
  if (length_scales.size() == 0) {
    throw InvalidArgument("length_scales must be nonempty");
  }
  for (int j = 0; j < length_scales.size(); ++j) {
    if (!(length_scales[j] > 0.0)) {
      throw InvalidArgument("length_scales[" + std::to_string(j) +
                            "] must be > 0");
    }
  }
  if (!(noise_variance >= 0.0)) {
    throw InvalidArgument("noise_variance must be >= 0");
  }
  if (!(jitter >= 0.0)) throw InvalidArgument("jitter must be >= 0");
}

GpHyperparams GpHyperparams::Isotropic(int dim, double length_scale,
                                       double output_scale,
                                       double noise_variance) {
  GpHyperparams h;
  h.output_scale = output_scale;
  h.length_scales = Eigen::VectorXd::Constant(dim, length_scale);
  h.noise_variance = noise_variance;
  return h;
}

JitterPolicy JitterPolicy::ForHyperparams(const GpHyperparams& h) {
  const double s2 = h.signal_variance();
  return JitterPolicy{h.jitter * s2, 1e-4 * s2, 10.0};
}

void GaussianBelief::Validate() const {
  if (cov.rows() != mean.size() || cov.cols() != mean.size()) {
    throw InvalidArgument("belief covariance shape does not match mean");
  }
  if (mean.size() == 0) return;
  const double asym = (cov - cov.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * std::max(1.0, cov.cwiseAbs().maxCoeff())) {
    throw InvalidArgument("belief covariance is not symmetric (max |C - C^T| = " +
                          std::to_string(asym) + ")");
  }
}

GaussianBelief GaussianBelief::Marginal(std::span<const int> indices) const {
  const int n = static_cast<int>(indices.size());
  GaussianBelief out(Eigen::VectorXd(n), Eigen::MatrixXd(n, n));
  for (int a = 0; a < n; ++a) {
    if (indices[a] < 0 || indices[a] >= dim()) {
      throw InvalidArgument("marginal index out of range");
    }
    out.mean[a] = mean[indices[a]];
    for (int b = 0; b < n; ++b) out.cov(a, b) = cov(indices[a], indices[b]);
  }
  return out;
}

GaussianBelief GaussianBelief::Map(const Eigen::MatrixXd& map) const {
  if (map.cols() != mean.size()) {
    throw InvalidArgument("linear map has wrong number of columns");
  }
  Eigen::MatrixXd c = map * cov * map.transpose();
  c = 0.5 * (c + c.transpose());
  return GaussianBelief(map * mean, std::move(c));
}

double SeKernel(const Eigen::Ref<const Eigen::VectorXd>& x,
                const Eigen::Ref<const Eigen::VectorXd>& xb,
                const GpHyperparams& h) {
  CheckDims(x, xb, h);
  double r2 = 0.0;
  for (int j = 0; j < x.size(); ++j) {
    // (x - xb)^2 == (xb - x)^2 bitwise, so the kernel is exactly symmetric.
    const double d = (x[j] - xb[j]) / h.length_scales[j];
    r2 += d * d;
  }
  return h.signal_variance() * std::exp(-0.5 * r2);
}

double SeKernelGrad(int i, const Eigen::Ref<const Eigen::VectorXd>& x,
                    const Eigen::Ref<const Eigen::VectorXd>& xb,
                    const GpHyperparams& h) {
  CheckIndex(i, h);
  const double li = h.length_scales[i];
  return SeKernel(x, xb, h) * (x[i] - xb[i]) / (li * li);
}

double SeKernelHess(int i, int j, const Eigen::Ref<const Eigen::VectorXd>& x,
                    const Eigen::Ref<const Eigen::VectorXd>& xb,
                    const GpHyperparams& h) {
  CheckIndex(i, h);
  CheckIndex(j, h);
  const double li2 = h.length_scales[i] * h.length_scales[i];
  const double lj2 = h.length_scales[j] * h.length_scales[j];
  const double diag = (i == j) ? 1.0 / li2 : 0.0;
  return SeKernel(x, xb, h) *
         (diag + (x[i] - xb[i]) * (xb[j] - x[j]) / (li2 * lj2));
}

Eigen::MatrixXd SeGram(std::span<const Eigen::VectorXd> points,
                       const GpHyperparams& h) {
  const int n = static_cast<int>(points.size());
  Eigen::MatrixXd k(n, n);
  for (int a = 0; a < n; ++a) {
    k(a, a) = SeKernel(points[a], points[a], h);
    for (int b = a + 1; b < n; ++b) {
      k(a, b) = k(b, a) = SeKernel(points[a], points[b], h);
    }
  }
  return k;
}

Eigen::LLT<Eigen::MatrixXd> FactorizeWithJitter(const Eigen::MatrixXd& a,
                                                const JitterPolicy& jitter) {
  const int n = static_cast<int>(a.rows());
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() == Eigen::Success) return llt;
  double added = jitter.initial > 0.0 ? jitter.initial : jitter.max * 1e-6;
  for (;;) {
    llt.compute(a + added * eye);
    if (llt.info() == Eigen::Success) return llt;
    if (added >= jitter.max) break;
    added = std::min(added * jitter.factor, jitter.max);
  }
  std::ostringstream msg;
  msg << "Cholesky factorization failed for " << n << "x" << n
      << " block after jitter " << added;
  if (n > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
        a, Eigen::EigenvaluesOnly);
    msg << "; eigenvalue range [" << eig.eigenvalues().minCoeff() << ", "
        << eig.eigenvalues().maxCoeff() << "]";
  }
  throw NumericalError(msg.str());
}

GaussianBelief Condition(const GaussianBelief& joint,
                         std::span<const int> observed,
                         const Eigen::VectorXd& observations,
                         const Eigen::MatrixXd& noise_cov,
                         const JitterPolicy& jitter) {
  joint.Validate();
  const int n = joint.dim();
  const int m = static_cast<int>(observed.size());
  if (observations.size() != m) {
    throw InvalidArgument("observation count does not match observed indices");
  }
  if (noise_cov.rows() != m || noise_cov.cols() != m) {
    throw InvalidArgument("noise covariance must be " + std::to_string(m) +
                          "x" + std::to_string(m));
  }
  std::vector<char> is_observed(n, 0);
  for (int idx : observed) {
    if (idx < 0 || idx >= n) {
      throw InvalidArgument("observed index " + std::to_string(idx) +
                            " out of range");
    }
    if (is_observed[idx]) throw InvalidArgument("duplicate observed index");
    is_observed[idx] = 1;
  }
  std::vector<int> free;
  for (int a = 0; a < n; ++a) {
    if (!is_observed[a]) free.push_back(a);
  }
  GaussianBelief prior = joint.Marginal(free);
  if (m == 0) return prior;

  const int f = static_cast<int>(free.size());
  Eigen::MatrixXd k_oo(m, m);
  Eigen::MatrixXd k_of(m, f);
  Eigen::VectorXd resid(m);
  for (int a = 0; a < m; ++a) {
    resid[a] = observations[a] - joint.mean[observed[a]];
    for (int b = 0; b < m; ++b) k_oo(a, b) = joint.cov(observed[a], observed[b]);
    for (int b = 0; b < f; ++b) k_of(a, b) = joint.cov(observed[a], free[b]);
  }
  k_oo += noise_cov;
  k_oo = 0.5 * (k_oo + k_oo.transpose());

  const auto llt = FactorizeWithJitter(k_oo, jitter);
  const Eigen::VectorXd alpha = llt.solve(resid);
  const Eigen::MatrixXd v = llt.matrixL().solve(k_of);

  GaussianBelief post;
  post.mean = prior.mean + k_of.transpose() * alpha;
  post.cov = prior.cov - v.transpose() * v;
  post.cov = 0.5 * (post.cov + post.cov.transpose());
  return post;
}

double NormalCdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double NormalPdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double ExpectedPositivePart(double mu, double sigma) {
  if (!(sigma >= 0.0)) throw InvalidArgument("sigma must be >= 0");
  if (sigma == 0.0) return std::max(mu, 0.0);
  const double z = mu / sigma;
  // mu * (1 - Phi(-mu/sigma)) + sigma * phi(mu/sigma), written with
  // Phi(z) = 1 - Phi(-z) to avoid cancellation.
  return std::max(0.0, mu * NormalCdf(z) + sigma * NormalPdf(z));
}

double OrthantProbability(const GaussianBelief& belief) {
  if (belief.dim() != 2) {
    throw InvalidArgument("orthant probability needs a 2-D belief");
  }
  const double ma = belief.mean[0];
  const double mb = belief.mean[1];
  const double va = std::max(belief.cov(0, 0), 0.0);
  const double vb = std::max(belief.cov(1, 1), 0.0);
  const double sa = std::sqrt(va);
  const double sb = std::sqrt(vb);
  constexpr double kTinyVar = 1e-300;

  if (va <= kTinyVar && vb <= kTinyVar) {
    return (ma >= 0.0 && mb >= 0.0) ? 1.0 : 0.0;
  }
  if (va <= kTinyVar) return ma >= 0.0 ? NormalCdf(mb / sb) : 0.0;
  if (vb <= kTinyVar) return mb >= 0.0 ? NormalCdf(ma / sa) : 0.0;

  const double rho = std::clamp(belief.cov(0, 1) / (sa * sb), -1.0, 1.0);
  const double ha = ma / sa;
  const double hb = mb / sb;
  const double s = 1.0 - rho * rho;
  if (s < 1e-14) {
    // b is an affine function of a: b = mb + sign(rho) * sb * z.
    if (rho > 0.0) return NormalCdf(std::min(ha, hb));
    return std::max(0.0, NormalCdf(hb) - NormalCdf(-ha));
  }

  // P = int_{-ha}^{inf} phi(z) Phi((hb + rho z) / sqrt(1 - rho^2)) dz.
  const double lo = std::max(-ha, -kNormalTail);
  const double hi = kNormalTail;
  if (lo >= hi) return 0.0;
  const double root = std::sqrt(s);
  auto integrand = [&](double z) {
    return NormalPdf(z) * NormalCdf((hb + rho * z) / root);
  };
  const double p = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, lo, hi, 30, 1e-10);
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace pgbo
