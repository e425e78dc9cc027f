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

#ifndef PGBO_TRACE_H_
#define PGBO_TRACE_H_

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pgbo/path.h"

namespace pgbo {

enum class StopReason {
  kEiBelowThreshold,
  kMaxIterations,
  kLineSearchStalled,
  kRoundsExhausted,
};

const char* StopReasonName(StopReason r);

// Row phases: "init" (space-filling / start profile), "warmup" (cold-start
// probes of the continuous solver), "search" (one row per solver iteration).
struct TraceRow {
  int step = 0;
  std::string phase;
  int deviator = -1;
  Profile profile;
  double delta_y = std::numeric_limits<double>::quiet_NaN();
  double ei = std::numeric_limits<double>::quiet_NaN();
  double delta = std::numeric_limits<double>::quiet_NaN();
  double p_w = std::numeric_limits<double>::quiet_NaN();
  bool clipped = false;
};

struct SolveTrace {
  std::string solver;  // "finite" or "infinite"
  std::vector<TraceRow> rows;
  PathHistory path;
  Profile final_profile;
  std::vector<int> final_indices;  // finite solver only
  int iterations = 0;              // search-phase moves
  int oracle_calls = 0;            // every bandit-feedback query
  StopReason stop = StopReason::kMaxIterations;
  // Acquisition value at the last evaluation (the one that triggered the stop
  // when stop == kEiBelowThreshold).
  double final_ei = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> search_ei() const;
};

// Unified trace CSV:
//   step,phase,deviator,x_1..x_I,delta_y,ei,delta,p_w,clipped
// Not-applicable numeric fields are written empty.
void WriteTraceCsv(const SolveTrace& trace, std::ostream& out);

// Shortest-round-trip decimal formatting used by every writer.
std::string FormatDouble(double v);

}  // namespace pgbo

#endif  // PGBO_TRACE_H_
