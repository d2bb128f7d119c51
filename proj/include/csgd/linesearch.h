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

#ifndef CSGD_LINESEARCH_H_
#define CSGD_LINESEARCH_H_

#include <functional>
#include <limits>
#include <string>

#include "csgd/types.h"

namespace csgd {

// How alpha_max is chosen before each search.
//   kReset     alpha_max = omega * alpha_prev (optionally capped)
//   kConstant  alpha_max = alpha_max_init every time
enum class AlphaMaxPolicy { kReset, kConstant };

const char* AlphaMaxPolicyName(AlphaMaxPolicy p);
AlphaMaxPolicy ParseAlphaMaxPolicy(const std::string& name);

struct ArmijoConfig {
  double sigma = 0.1;
  double rho = 0.8;
  double omega = 1.2;
  double scale_a = 0.3;
  double alpha_max_init = 0.1;
  int max_backtracks = 200;
  double alpha_max_cap = std::numeric_limits<double>::infinity();
  AlphaMaxPolicy policy = AlphaMaxPolicy::kReset;

  void Validate() const;
};

struct LineSearchResult {
  double alpha = 0.0;
  double eta = 0.0;
  int backtracks = 0;
  int evals = 0;
};

using ValueFn = std::function<double(const DenseVector&)>;

// Backtracking on alpha: alpha <- rho * alpha starting from alpha_max, and
// stop at the first candidate with
//   value_fn(x - alpha*grad) <= f_at_x - sigma * alpha * |grad|^2.
// The acceptance test never sees scale_a; only eta = scale_a * alpha does.
LineSearchResult ArmijoSearch(const ValueFn& value_fn, const DenseVector& x,
                              const DenseVector& grad, double f_at_x,
                              double alpha_max, const ArmijoConfig& cfg);

double NextAlphaMax(double alpha_prev, const ArmijoConfig& cfg);

// alpha_prev such that the first NextAlphaMax yields alpha_max_init.
double InitialAlphaPrev(const ArmijoConfig& cfg);

}  // namespace csgd

#endif  // CSGD_LINESEARCH_H_
