// Copyright 2026 The csgd-lab Authors. All Rights Reserved.
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
// =============================================================================

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "csgd/trace.h"

namespace csgd {

const char* RunStatusName(RunStatus s) {
  switch (s) {
    case RunStatus::kCompleted: return "COMPLETED";
    case RunStatus::kDiverged: return "DIVERGED";
    case RunStatus::kFailed: return "FAILED";
  }
  return "UNKNOWN";
}

std::string FormatReal(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string TraceHeader(bool distributed) {
  std::string h = "t,i_t,f_full,f_i,grad_sq,alpha,eta,mem_sq,dist_sq,"
                  "backtracks,evals";
  if (distributed)
    h += ",bytes_up,bytes_down,worker_alpha_min,worker_alpha_max";
  return h;
}

void WriteTraceCsv(std::ostream& os, const RunTrace& trace) {
  os << TraceHeader(trace.distributed) << '\n';
  for (const auto& r : trace.records) {
    os << r.t << ',' << r.i_t << ',' << FormatReal(r.f_full) << ','
       << FormatReal(r.f_i) << ',' << FormatReal(r.grad_sq) << ','
       << FormatReal(r.alpha) << ',' << FormatReal(r.eta) << ','
       << FormatReal(r.mem_sq) << ',' << FormatReal(r.dist_sq) << ','
       << r.backtracks << ',' << r.evals;
    if (trace.distributed) {
      os << ',' << r.bytes_up << ',' << r.bytes_down << ','
         << FormatReal(r.worker_alpha_min) << ','
         << FormatReal(r.worker_alpha_max);
    }
    os << '\n';
  }
}

std::string TraceCsv(const RunTrace& trace) {
  std::ostringstream os;
  WriteTraceCsv(os, trace);
  return os.str();
}

std::string AggregateHeader(bool distributed) {
  return "epoch,runs," + TraceHeader(distributed);
}

void WriteAggregateCsv(std::ostream& os, const std::vector<RunTrace>& traces,
                       std::int64_t iters_per_epoch) {
  const bool dist = !traces.empty() && traces.front().distributed;
  os << AggregateHeader(dist) << '\n';
  std::size_t len = 0;
  for (const auto& tr : traces) len = std::max(len, tr.records.size());
  if (iters_per_epoch < 1) iters_per_epoch = 1;
  for (std::size_t t = 0; t < len; ++t) {
    int runs = 0;
    double acc[13] = {0};
    for (const auto& tr : traces) {
      if (t >= tr.records.size()) continue;
      const auto& r = tr.records[t];
      const double v[13] = {static_cast<double>(r.i_t), r.f_full, r.f_i,
                            r.grad_sq, r.alpha, r.eta, r.mem_sq, r.dist_sq,
                            static_cast<double>(r.backtracks),
                            static_cast<double>(r.evals),
                            static_cast<double>(r.bytes_up),
                            static_cast<double>(r.bytes_down),
                            r.worker_alpha_min};
      for (int c = 0; c < 13; ++c) acc[c] += v[c];
      ++runs;
    }
    double wmax = 0.0;
    for (const auto& tr : traces)
      if (t < tr.records.size()) wmax += tr.records[t].worker_alpha_max;
    const double inv = 1.0 / runs;
    os << static_cast<std::int64_t>(t) / iters_per_epoch << ',' << runs << ','
       << t;
    for (int c = 0; c < 10; ++c) os << ',' << FormatReal(acc[c] * inv);
    if (dist) {
      for (int c = 10; c < 13; ++c) os << ',' << FormatReal(acc[c] * inv);
      os << ',' << FormatReal(wmax * inv);
    }
    os << '\n';
  }
}

}  // namespace csgd
