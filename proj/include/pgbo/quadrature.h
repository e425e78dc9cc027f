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

#ifndef PGBO_QUADRATURE_H_
#define PGBO_QUADRATURE_H_

#include <vector>

namespace pgbo {

// Gauss-Legendre nodes and weights mapped to [0, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int order() const { return static_cast<int>(nodes.size()); }
};

// Newton iteration on the Legendre recurrence; order >= 1.
GaussLegendreRule GaussLegendreUnit(int order);

}  // namespace pgbo

#endif  // PGBO_QUADRATURE_H_
