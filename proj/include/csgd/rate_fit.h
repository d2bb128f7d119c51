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

#ifndef CSGD_RATE_FIT_H_
#define CSGD_RATE_FIT_H_

#include <cstdint>
#include <string>
#include <vector>

namespace csgd {

enum class RateModel { kPowerLaw, kGeometric };

struct RateFit {
  RateModel model = RateModel::kGeometric;
  double slope = 0.0;       // log-log slope, or log rate per iteration
  double intercept = 0.0;
  double r_squared = 0.0;
  std::int64_t t_start = 0;
  std::int64_t t_end = 0;   // inclusive
  int points = 0;
};

// Least squares of log(loss[t]) against log(t) (power law, t >= 1 only) or
// against t (geometric) over the window [t_start, t_end]. Non-positive
// losses are skipped; fewer than 10 usable points is an error.
RateFit FitRate(const std::vector<double>& loss, RateModel model,
                std::int64_t t_start, std::int64_t t_end);

}  // namespace csgd

#endif  // CSGD_RATE_FIT_H_
