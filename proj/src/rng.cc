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

#include "csgd/rng.h"

#include <cmath>

#include "csgd/types.h"

namespace csgd {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidSpec: return "invalid-spec";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kIndexOutOfRange: return "index-out-of-range";
    case ErrorCode::kEstimationFailed: return "estimation-failed";
    case ErrorCode::kSearchFailed: return "search-failed";
    case ErrorCode::kDegenerateInput: return "degenerate-input";
    case ErrorCode::kInfeasible: return "infeasible";
    case ErrorCode::kConstructionFailed: return "construction-failed";
    case ErrorCode::kProtocol: return "protocol";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kDomain: return "domain";
  }
  return "unknown";
}

double Rng::Uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::UniformIndex(std::uint64_t n) {
  if (n == 0) throw Error(ErrorCode::kDomain, "UniformIndex: n == 0");
  // Reject the top partial block so every residue is equally likely.
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = engine_();
    if (r >= threshold) return r % n;
  }
}

double Rng::Normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * Uniform() - 1.0;
    v = 2.0 * Uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * scale;
  has_spare_ = true;
  return u * scale;
}

std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t k) {
  if (k == 0) return seed;
  // splitmix64 finaliser over (seed, k)
  std::uint64_t z = seed + k * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace csgd
