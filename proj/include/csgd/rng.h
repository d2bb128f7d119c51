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

#ifndef CSGD_RNG_H_
#define CSGD_RNG_H_

#include <cstdint>
#include <random>

namespace csgd {

// Portable random stream. The raw engine is std::mt19937_64, whose output
// sequence is fixed by the C++ standard. Every derived variate is computed
// here rather than through <random> distributions, which are
// implementation-defined:
//   Uniform()      top 53 bits of one draw, scaled by 2^-53, in [0, 1)
//   UniformIndex() rejection sampling on the low bits, unbiased
//   Normal()       Marsaglia polar method, second variate cached
// A given seed therefore yields the same stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }
  double Uniform();
  // Uniform on (0, 1].
  double UniformPositive() { return 1.0 - Uniform(); }
  std::uint64_t UniformIndex(std::uint64_t n);
  double Normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Seed for worker `k` of a run seeded with `seed`; worker 0 inherits the run
// seed so a one-worker topology samples exactly like the single-node loop.
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t k);

}  // namespace csgd

#endif  // CSGD_RNG_H_
