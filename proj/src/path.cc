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

#include "pgbo/path.h"

#include <string>

#include "pgbo/errors.h"

namespace pgbo {

int UniqueDeviator(const Profile& a, const Profile& b) {
  if (a.size() != b.size()) return -1;
  int dev = -1;
  for (int i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) {
      if (dev >= 0) return -1;
      dev = i;
    }
  }
  return dev;
}

void PathHistory::Start(const Profile& x0, const Eigen::VectorXd& y0) {
  if (x0.size() == 0) throw InvalidArgument("profile must be nonempty");
  if (y0.size() != x0.size()) {
    throw InvalidArgument("need one measured utility per player");
  }
  profiles_.assign(1, x0);
  raw_y_.assign(1, y0);
  deviators_.clear();
  delta_y_.clear();
}

void PathHistory::Append(const Profile& x, const Eigen::VectorXd& y) {
  if (profiles_.empty()) throw InvalidArgument("Append on an unstarted path");
  if (y.size() != x.size()) {
    throw InvalidArgument("need one measured utility per player");
  }
  const int dev = UniqueDeviator(profiles_.back(), x);
  if (dev < 0) {
    throw InvalidArgument("step " + std::to_string(profiles_.size()) +
                          " is not a unilateral deviation");
  }
  deviators_.push_back(dev);
  delta_y_.push_back(y[dev] - raw_y_.back()[dev]);
  profiles_.push_back(x);
  raw_y_.push_back(y);
}

int PathHistory::players() const {
  return profiles_.empty() ? 0 : static_cast<int>(profiles_.front().size());
}

Eigen::VectorXd PathHistory::delta_y() const {
  return Eigen::Map<const Eigen::VectorXd>(delta_y_.data(),
                                           static_cast<Eigen::Index>(delta_y_.size()));
}

void PathHistory::Validate() const {
  if (profiles_.empty()) {
    if (!deviators_.empty() || !delta_y_.empty() || !raw_y_.empty()) {
      throw InvalidArgument("empty path carries step data");
    }
    return;
  }
  const std::size_t k = profiles_.size();
  if (deviators_.size() != k - 1 || delta_y_.size() != k - 1 ||
      raw_y_.size() != k) {
    throw InvalidArgument("path bookkeeping lengths are inconsistent");
  }
  for (std::size_t s = 1; s < k; ++s) {
    const int dev = UniqueDeviator(profiles_[s - 1], profiles_[s]);
    if (dev < 0 || dev != deviators_[s - 1]) {
      throw InvalidArgument("step " + std::to_string(s) +
                            " does not have the recorded unique deviator");
    }
    if (delta_y_[s - 1] != raw_y_[s][dev] - raw_y_[s - 1][dev]) {
      throw InvalidArgument("step " + std::to_string(s) +
                            " delta_y disagrees with raw measurements");
    }
  }
}

Eigen::MatrixXd DifferenceNoiseCov(const PathHistory& path,
                                   double noise_variance, bool correlated) {
  const int m = path.steps();
  Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(m, m) * (2.0 * noise_variance);
  if (correlated) {
    for (int s = 1; s < m; ++s) {
      if (path.deviators()[s] == path.deviators()[s - 1]) {
        cov(s, s - 1) = cov(s - 1, s) = -noise_variance;
      }
    }
  }
  return cov;
}

}  // namespace pgbo
