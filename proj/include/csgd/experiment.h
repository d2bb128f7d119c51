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

#ifndef CSGD_EXPERIMENT_H_
#define CSGD_EXPERIMENT_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "csgd/config.h"
#include "csgd/objectives.h"
#include "csgd/trace.h"

namespace csgd {

enum class Verdict { kConverged, kDiverged, kProgressing, kFailed };
const char* VerdictName(Verdict v);

// DIVERGED: flagged by the loop or final loss > 10x initial.
// CONVERGED: final loss < 1e-4 x initial.
Verdict Classify(const RunTrace& trace);

struct SeedRun {
  std::uint64_t seed = 0;
  RunTrace trace;
  std::string csv_path;
};

struct VariantRun {
  std::string name;
  std::vector<SeedRun> runs;
  std::string aggregate_path;
};

struct ExperimentResult {
  std::vector<VariantRun> variants;
  bool any_failed = false;
};

DenseVector MakeStartPoint(const std::string& x0, int d);

RunTrace RunOne(const FiniteSumObjective& obj, const AlgorithmSpec& alg,
                const RunSpec& run, std::uint64_t seed);

// Thread budget for seed-level parallelism: CSGD_LAB_THREADS when set,
// otherwise the hardware concurrency.
int ThreadBudget();

// Runs every variant over every seed. With write_files, CSVs go to
// <output_dir>/<variant>_seed<seed>.csv plus <variant>_aggregate.csv.
ExperimentResult RunExperiment(const ExperimentConfig& cfg, bool write_files,
                               int threads);

void PrintSummary(std::ostream& os, const ExperimentConfig& cfg,
                  const ExperimentResult& res);

// `run <config>` as a function; returns the process exit code.
int CliRun(const std::string& config_path, std::ostream& out,
           std::ostream& err);

}  // namespace csgd

#endif  // CSGD_EXPERIMENT_H_
