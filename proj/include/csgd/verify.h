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

#ifndef CSGD_VERIFY_H_
#define CSGD_VERIFY_H_

#include <string>
#include <vector>

namespace csgd {

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct SuiteOptions {
  bool quick = false;             // fewer seeds and samples
  bool disable_scaling = false;   // fault injection: scaled runs use a = 1
  std::string golden_dir;         // holds trace_header*.csv
  std::string scratch_dir;        // for the CLI determinism check
};

// Brute-force minimum of 1/s + psi/z over s + psi(1+z) <= 1 on a 1e-3 grid,
// refined locally to 1e-6.
double SzGridOracle(double psi);

CheckResult CheckSzOracle(const SuiteOptions& o);
CheckResult CheckZetaConsistency(const SuiteOptions& o);
CheckResult CheckContraction(const SuiteOptions& o);
CheckResult CheckPerturbedIdentity(const SuiteOptions& o);
CheckResult CheckDistributedIdentity(const SuiteOptions& o);
CheckResult CheckArmijoGuarantees(const SuiteOptions& o);
CheckResult CheckScalingNecessity(const SuiteOptions& o);
CheckResult CheckScaledGd(const SuiteOptions& o);
CheckResult CheckConvexBound(const SuiteOptions& o);
CheckResult CheckStronglyConvexBound(const SuiteOptions& o);
CheckResult CheckNonconvexConstants(const SuiteOptions& o);
CheckResult CheckDeterminismAndSchema(const SuiteOptions& o);

// All twelve, in order.
std::vector<CheckResult> RunSuite(const SuiteOptions& o);

}  // namespace csgd

#endif  // CSGD_VERIFY_H_
