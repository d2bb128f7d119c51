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

#ifndef CSGD_CONFIG_H_
#define CSGD_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

#include "csgd/linesearch.h"
#include "csgd/objectives.h"

namespace csgd {

// Experiment files are line oriented:
//
//   # comment
//   [objective]
//   kind = interpolated_regression
//   n = 2000
//   [algorithm]
//   name = csgd_asss
//   scale_a = 0.3
//   [run]
//   passes = 50
//   seeds = 1-20
//   [variant unscaled]
//   scale_a = 1
//
// Every key is typed and checked; unknown sections or keys are errors that
// name the file and line. A [variant NAME] section holds algorithm keys
// layered over [algorithm]; without variants a single one named "main" runs.

struct ConfigEntry {
  std::string key;
  std::string value;
  int line = 0;
};

struct ConfigSection {
  std::string name;     // "objective", "algorithm", "run" or "variant"
  std::string label;    // variant name
  int line = 0;
  std::vector<ConfigEntry> entries;
};

struct RawConfig {
  std::string source;
  std::vector<ConfigSection> sections;

  // Replace (or append) `key` in the first section called `section`,
  // creating the section when absent. Used by sweeps.
  void Set(const std::string& section, const std::string& key,
           const std::string& value);
};

RawConfig ParseConfigText(const std::string& text, const std::string& source);
RawConfig LoadConfigFile(const std::string& path);

struct ObjectiveSpec {
  ObjectiveKind kind = ObjectiveKind::kDiagQuadratic;
  int n = 1;
  int d = 1;
  double feature_std = 1.0;
  double mu_floor = 0.1;
  std::uint64_t seed = 1;
  std::vector<double> curvatures;      // explicit list, or
  std::string curvature_law;           // "inverse_pow2" | "constant"
  double curvature_exponent = 0.0;     // constant law: c = 2^-exponent
};

FiniteSumObjective BuildObjective(const ObjectiveSpec& spec);

enum class Algorithm { kCsgdAsss, kScaledGd, kNonadaptiveCsgd, kSgdArmijo,
                       kDcsgdAsss };
const char* AlgorithmName(Algorithm a);

struct AlgorithmSpec {
  Algorithm name = Algorithm::kCsgdAsss;
  ArmijoConfig armijo;
  int k = 0;              // 0: derived from gamma, or d when both absent
  double gamma = 0.0;
  double eta_fixed = 0.0;
  bool has_eta_fixed = false;
  int workers = 0;
  int batch = 1;
  bool parallel_workers = false;

  int ResolveK(int d) const;
};

struct RunSpec {
  std::int64_t T = 0;
  double passes = 0.0;    // T = ceil(passes * n / batch) when T is absent
  std::vector<std::uint64_t> seeds{1};
  std::string x0 = "zeros";
  std::string output_dir = "csgd_out";
  bool store_iterates = false;

  std::int64_t ResolveT(int n, int batch) const;
};

struct Variant {
  std::string name;
  AlgorithmSpec algorithm;
};

struct ExperimentConfig {
  std::string source;
  ObjectiveSpec objective;
  RunSpec run;
  std::vector<Variant> variants;
};

ExperimentConfig BuildConfig(const RawConfig& raw);
ExperimentConfig LoadExperiment(const std::string& path);

// "1-5" or "1,2,7" or a mix
std::vector<std::uint64_t> ParseSeedList(const std::string& text);
std::vector<std::string> SplitList(const std::string& text, char sep = ',');

}  // namespace csgd

#endif  // CSGD_CONFIG_H_
