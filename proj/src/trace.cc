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

#include "pgbo/trace.h"

#include <charconv>
#include <cmath>
#include <ostream>

namespace pgbo {

const char* StopReasonName(StopReason r) {
  switch (r) {
    case StopReason::kEiBelowThreshold:
      return "ei_below_threshold";
    case StopReason::kMaxIterations:
      return "max_iterations";
    case StopReason::kLineSearchStalled:
      return "line_search_stalled";
    case StopReason::kRoundsExhausted:
      return "rounds_exhausted";
  }
  return "unknown";
}

std::vector<double> SolveTrace::search_ei() const {
  std::vector<double> out;
  for (const auto& r : rows) {
    if (r.phase == "search") out.push_back(r.ei);
  }
  return out;
}

std::string FormatDouble(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void WriteTraceCsv(const SolveTrace& trace, std::ostream& out) {
  const int players = static_cast<int>(trace.final_profile.size());
  out << "step,phase,deviator";
  for (int i = 1; i <= players; ++i) out << ",x_" << i;
  out << ",delta_y,ei,delta,p_w,clipped\n";
  for (const auto& r : trace.rows) {
    out << r.step << ',' << r.phase << ',';
    if (r.deviator >= 0) out << r.deviator + 1;
    for (int i = 0; i < players; ++i) out << ',' << FormatDouble(r.profile[i]);
    out << ',' << FormatDouble(r.delta_y) << ',' << FormatDouble(r.ei) << ','
        << FormatDouble(r.delta) << ',' << FormatDouble(r.p_w) << ','
        << (r.clipped ? 1 : 0) << '\n';
  }
}

}  // namespace pgbo
