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

#include "csgd/linesearch.h"

#include <algorithm>
#include <cmath>

namespace csgd {

const char* AlphaMaxPolicyName(AlphaMaxPolicy p) {
  return p == AlphaMaxPolicy::kReset ? "reset" : "constant";
}

AlphaMaxPolicy ParseAlphaMaxPolicy(const std::string& name) {
  if (name == "reset") return AlphaMaxPolicy::kReset;
  if (name == "constant") return AlphaMaxPolicy::kConstant;
  throw Error(ErrorCode::kInvalidSpec,
              "alpha_max policy must be reset or constant, got '" + name + "'");
}

void ArmijoConfig::Validate() const {
  auto fail = [](const std::string& m) {
    throw Error(ErrorCode::kInvalidSpec, m);
  };
  if (!(sigma > 0.0 && sigma < 1.0)) fail("sigma must lie in (0,1)");
  if (!(rho > 0.0 && rho < 1.0)) fail("rho must lie in (0,1)");
  if (!(omega >= 1.0) || !std::isfinite(omega)) fail("omega must be >= 1");
  if (!(scale_a > 0.0) || !std::isfinite(scale_a))
    fail("scale_a must be positive");
  if (!(alpha_max_init > 0.0) || !std::isfinite(alpha_max_init))
    fail("alpha_max_init must be positive");
  if (max_backtracks < 1) fail("max_backtracks must be >= 1");
  if (!(alpha_max_cap > 0.0)) fail("alpha_max_cap must be positive");
}

LineSearchResult ArmijoSearch(const ValueFn& value_fn, const DenseVector& x,
                              const DenseVector& grad, double f_at_x,
                              double alpha_max, const ArmijoConfig& cfg) {
  CheckDim(grad.size(), x.size(), "armijo gradient");
  if (!(alpha_max > 0.0))
    throw Error(ErrorCode::kInvalidSpec, "alpha_max must be positive");
  const double gsq = grad.squaredNorm();
  if (!(gsq > 0.0))
    throw Error(ErrorCode::kDegenerateInput, "armijo search at zero gradient");

  LineSearchResult res;
  double alpha = alpha_max;
  DenseVector trial(x.size());
  while (res.backtracks < cfg.max_backtracks) {
    alpha *= cfg.rho;
    ++res.backtracks;
    trial = x - alpha * grad;
    const double f_trial = value_fn(trial);
    ++res.evals;
    if (f_trial <= f_at_x - cfg.sigma * alpha * gsq) {
      res.alpha = alpha;
      res.eta = cfg.scale_a * alpha;
      return res;
    }
  }
  throw SearchFailedError("armijo search exhausted " +
                              std::to_string(cfg.max_backtracks) +
                              " backtracks",
                          alpha);
}

double NextAlphaMax(double alpha_prev, const ArmijoConfig& cfg) {
  if (cfg.policy == AlphaMaxPolicy::kConstant) return cfg.alpha_max_init;
  return std::min(cfg.omega * alpha_prev, cfg.alpha_max_cap);
}

double InitialAlphaPrev(const ArmijoConfig& cfg) {
  return cfg.alpha_max_init / cfg.omega;
}

}  // namespace csgd
