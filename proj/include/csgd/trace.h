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

#ifndef CSGD_TRACE_H_
#define CSGD_TRACE_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "csgd/types.h"

namespace csgd {

// One row per iteration, all values taken at x_t before the step.
struct StepRecord {
  std::int64_t t = 0;
  int i_t = 0;             // first sampled component (0 for full-gradient runs)
  double f_full = 0.0;
  double f_i = 0.0;
  double grad_sq = 0.0;
  double alpha = 0.0;
  double eta = 0.0;
  double mem_sq = 0.0;
  double dist_sq = 0.0;    // NaN when x* is unknown
  int backtracks = 0;
  std::int64_t evals = 0;  // cumulative value_fn calls
  // distributed runs only
  std::int64_t bytes_up = 0;
  std::int64_t bytes_down = 0;
  double worker_alpha_min = 0.0;
  double worker_alpha_max = 0.0;
};

enum class RunStatus { kCompleted, kDiverged, kFailed };
const char* RunStatusName(RunStatus s);

struct RunTrace {
  std::vector<StepRecord> records;
  RunStatus status = RunStatus::kCompleted;
  std::string diagnostic;
  bool distributed = false;
  double initial_f = 0.0;
  double final_f = 0.0;           // f at the last iterate reached
  double final_dist_sq = 0.0;
  // max over steps of |(x_t - xhat_t) - m_t| / (1 + |m_t|), or the
  // distributed analogue relative to (1 + |x_t|)
  double max_identity_residual = 0.0;
  std::vector<DenseVector> iterates;  // x_0 .. x_T when requested
  DenseVector final_x;
  std::vector<std::vector<double>> worker_alphas;  // [round][worker]
};

// Loss above this (or non-finite) marks a run as diverged.
inline constexpr double kDivergenceThreshold = 1e12;

std::string TraceHeader(bool distributed);
void WriteTraceCsv(std::ostream& os, const RunTrace& trace);
std::string TraceCsv(const RunTrace& trace);
// printf("%.17g"), round-trip exact
std::string FormatReal(double v);

// Per-t means across traces of possibly different lengths. `n_per_epoch`
// converts t into the epoch column.
void WriteAggregateCsv(std::ostream& os, const std::vector<RunTrace>& traces,
                       std::int64_t iters_per_epoch);
std::string AggregateHeader(bool distributed);

}  // namespace csgd

#endif  // CSGD_TRACE_H_
