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

#ifndef CSGD_OPTIMIZERS_H_
#define CSGD_OPTIMIZERS_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "csgd/compression.h"
#include "csgd/linesearch.h"
#include "csgd/objectives.h"
#include "csgd/rng.h"
#include "csgd/trace.h"

namespace csgd {

struct OptimizerState {
  DenseVector x;
  DenseVector mem;
  double alpha_prev = 0.0;
  std::int64_t t = 0;
  std::int64_t evals = 0;
  Rng rng{0};

  // x0, zero memory, alpha_prev = alpha_max_init / omega.
  static OptimizerState Initial(const DenseVector& x0, const ArmijoConfig& cfg,
                                std::uint64_t seed);
};

// x_hat_{t+1} = x_hat_t - eta_t * grad f_{i_t}(x_t)
struct PerturbedTracker {
  DenseVector x_hat;
  // |(x - x_hat) - m| / (1 + |m|)
  double Residual(const DenseVector& x, const DenseVector& m) const;
};

struct RunOptions {
  std::int64_t T = 100;
  std::uint64_t seed = 1;
  int batch = 1;
  std::optional<DenseVector> x0;  // zeros when unset
  bool track_perturbed = true;
  bool store_iterates = false;
};

// Step modes shared by the stochastic loops.
struct StepMode {
  bool adaptive = true;    // false: constant eta_fixed, no search
  double eta_fixed = 0.0;
};

struct StepOutput {
  DenseVector update;          // eta_t * grad f_{i_t}(x_t)
  DenseVector g;               // top_k(m_t + update), dense
  std::vector<int> support;    // increasing
};

// Components are sampled from [shard_begin, shard_begin + shard_size);
// shard_size < 0 means the whole objective.
struct Shard {
  int begin = 0;
  int size = -1;
};

// One CSGD-ASSS iteration on `state`. Fills `rec` with values at x_t except
// f_full and dist_sq, which are the caller's. Throws on search failure.
void CsgdStep(const FiniteSumObjective& obj, OptimizerState* state,
              const ArmijoConfig& cfg, const CompressionSpec& comp,
              const StepMode& mode, int batch, const Shard& shard,
              StepRecord* rec, StepOutput* out);

RunTrace RunCsgdAsss(const FiniteSumObjective& obj, const ArmijoConfig& cfg,
                     const CompressionSpec& comp, const RunOptions& opt);
RunTrace RunNonadaptiveCsgd(const FiniteSumObjective& obj, double eta_fixed,
                            const CompressionSpec& comp,
                            const RunOptions& opt);
// CSGD-ASSS with k = d.
RunTrace RunSgdArmijo(const FiniteSumObjective& obj, const ArmijoConfig& cfg,
                      const RunOptions& opt);
// Full-gradient Armijo descent with eta_t = a * alpha_t.
RunTrace RunScaledGd(const FiniteSumObjective& obj, const ArmijoConfig& cfg,
                     const RunOptions& opt);

// Running average (1/T) sum_{t<T} x_t for every T >= 1, from stored iterates.
std::vector<DenseVector> AveragedIterates(const RunTrace& trace);

}  // namespace csgd

#endif  // CSGD_OPTIMIZERS_H_
