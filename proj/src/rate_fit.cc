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

#include "csgd/rate_fit.h"

#include <algorithm>
#include <cmath>

#include "csgd/types.h"

namespace csgd {

RateFit FitRate(const std::vector<double>& loss, RateModel model,
                std::int64_t t_start, std::int64_t t_end) {
  const auto n = static_cast<std::int64_t>(loss.size());
  t_end = std::min(t_end, n - 1);
  if (t_start < 0 || t_start > t_end)
    throw Error(ErrorCode::kEstimationFailed, "empty fit window");
  std::vector<double> xs, ys;
  for (std::int64_t t = t_start; t <= t_end; ++t) {
    const double v = loss[static_cast<std::size_t>(t)];
    if (!(v > 0.0) || !std::isfinite(v)) continue;
    if (model == RateModel::kPowerLaw && t < 1) continue;
    xs.push_back(model == RateModel::kPowerLaw ? std::log(double(t))
                                               : double(t));
    ys.push_back(std::log(v));
  }
  if (xs.size() < 10)
    throw Error(ErrorCode::kEstimationFailed,
                "rate fit needs at least 10 positive points in the window");
  const double m = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  RateFit fit;
  fit.model = model;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  fit.t_start = t_start;
  fit.t_end = t_end;
  fit.points = static_cast<int>(xs.size());
  return fit;
}

}  // namespace csgd
