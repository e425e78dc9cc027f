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

#ifndef PGBO_PATH_H_
#define PGBO_PATH_H_

#include <vector>

#include <Eigen/Dense>

namespace pgbo {

// Joint action of all players in real coordinates. Finite games map grid
// indices to these coordinates before they reach the GP.
using Profile = Eigen::VectorXd;

// Index of the single coordinate in which `a` and `b` differ, or -1 when they
// differ in zero or several coordinates.
int UniqueDeviator(const Profile& a, const Profile& b);

// A path x^0, x^1, ..., x^k in which consecutive profiles differ in exactly
// one player's action, with the measured utilities at every profile.
class PathHistory {
 public:
  PathHistory() = default;

  // Starts a fresh path at `x0` with all-player measurement `y0`.
  void Start(const Profile& x0, const Eigen::VectorXd& y0);
  // Appends a unilateral deviation; throws InvalidArgument otherwise.
  void Append(const Profile& x, const Eigen::VectorXd& y);

  bool empty() const { return profiles_.empty(); }
  int size() const { return static_cast<int>(profiles_.size()); }
  // Number of observed differences (size() - 1, or 0 when empty).
  int steps() const { return static_cast<int>(deviators_.size()); }
  int players() const;

  const std::vector<Profile>& profiles() const { return profiles_; }
  const Profile& profile(int k) const { return profiles_.at(k); }
  const Profile& back() const { return profiles_.back(); }
  // Deviator of step k (1-based step, between profile k-1 and k).
  int deviator(int k) const { return deviators_.at(k - 1); }
  const std::vector<int>& deviators() const { return deviators_; }
  // Observed utility differences y^k_<k> - y^{k-1}_<k>, one per step.
  Eigen::VectorXd delta_y() const;
  const std::vector<Eigen::VectorXd>& raw_y() const { return raw_y_; }

  // Re-checks every invariant; throws InvalidArgument on violation.
  void Validate() const;

 private:
  std::vector<Profile> profiles_;
  std::vector<int> deviators_;
  std::vector<double> delta_y_;
  std::vector<Eigen::VectorXd> raw_y_;
};

// Noise covariance of the difference observations. Each difference is
// y^k_i - y^{k-1}_i with independent N(0, nu^2) measurement noise, so the
// diagonal is 2 nu^2. With `correlated`, consecutive differences by the same
// deviator share a measurement and get -nu^2 off the diagonal.
Eigen::MatrixXd DifferenceNoiseCov(const PathHistory& path,
                                   double noise_variance, bool correlated);

}  // namespace pgbo

#endif  // PGBO_PATH_H_
