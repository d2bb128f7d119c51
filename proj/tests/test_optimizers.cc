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

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "csgd/objectives.h"
#include "csgd/optimizers.h"
#include "csgd/theory.h"

namespace csgd {
namespace {

bool SameBits(double a, double b) { return std::memcmp(&a, &b, 8) == 0; }

void ExpectSameTrace(const RunTrace& a, const RunTrace& b) {
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t t = 0; t < a.records.size(); ++t) {
    const auto& x = a.records[t];
    const auto& y = b.records[t];
    EXPECT_EQ(x.i_t, y.i_t);
    EXPECT_TRUE(SameBits(x.f_full, y.f_full)) << t;
    EXPECT_TRUE(SameBits(x.alpha, y.alpha)) << t;
    EXPECT_TRUE(SameBits(x.eta, y.eta)) << t;
    EXPECT_TRUE(SameBits(x.mem_sq, y.mem_sq)) << t;
  }
  EXPECT_TRUE(SameBits(a.final_f, b.final_f));
}

TEST(CsgdStep, LosslessKeepsMemoryZero) {
  const auto obj = MakeDiagQuadratic({1.0, 3.0});
  ArmijoConfig cfg;
  RunOptions opt;
  opt.T = 20;
  opt.x0 = DenseVector::Ones(2);
  const auto tr = RunCsgdAsss(obj, cfg, CompressionSpec(2, 2), opt);
  for (const auto& r : tr.records) EXPECT_EQ(r.mem_sq, 0.0);
  EXPECT_LT(tr.final_f, tr.initial_f);
}

TEST(CsgdStep, HandTraceOfOneCompressedStep) {
  // f(x) = x1^2/2 + x2^2/2, x0 = [1, 1], k = 1. alpha_max = 1 and rho = 0.5
  // make the first candidate 0.5 the accepted step.
  const auto obj = MakeDiagQuadratic({0.5, 0.5});
  ArmijoConfig cfg;
  cfg.sigma = 0.1;
  cfg.rho = 0.5;
  cfg.scale_a = 0.5;
  cfg.alpha_max_init = 1.0;
  auto state = OptimizerState::Initial(DenseVector::Ones(2), cfg, 1);
  StepRecord rec;
  StepOutput out;
  CsgdStep(obj, &state, cfg, CompressionSpec(1, 2), StepMode{}, 1, Shard{},
           &rec, &out);
  EXPECT_EQ(rec.alpha, 0.5);
  EXPECT_EQ(rec.eta, 0.25);
  // eta * grad = [0.25, 0.25]; the tie keeps coordinate 0
  EXPECT_EQ(out.support, std::vector<int>{0});
  EXPECT_EQ(state.x[0], 0.75);
  EXPECT_EQ(state.x[1], 1.0);
  EXPECT_EQ(state.mem[0], 0.0);
  EXPECT_EQ(state.mem[1], 0.25);
}

TEST(Csgd, FirstRecordMatchesDirectEvaluation) {
  const auto obj = MakeInterpolatedRegression(30, 6, 1.0, 2);
  RunOptions opt;
  opt.T = 1;
  opt.x0 = DenseVector::Constant(6, 0.5);
  const auto tr = RunCsgdAsss(obj, ArmijoConfig{}, CompressionSpec(2, 6), opt);
  ASSERT_EQ(tr.records.size(), 1u);
  EXPECT_EQ(tr.records[0].f_full, obj.FullValue(*opt.x0));
  EXPECT_EQ(tr.initial_f, obj.FullValue(*opt.x0));
}

TEST(Csgd, LosslessEqualsUncompressedArmijo) {
  const auto obj = MakeInterpolatedRegression(1, 4, 1.0, 2);
  ArmijoConfig cfg;
  cfg.scale_a = 1.0;
  RunOptions opt;
  opt.T = 50;
  ExpectSameTrace(RunCsgdAsss(obj, cfg, CompressionSpec(4, 4), opt),
                  RunSgdArmijo(obj, cfg, opt));
}

TEST(Csgd, SgdArmijoEqualsFullK) {
  const auto obj = MakeInterpolatedRegression(40, 8, 1.0, 6);
  ArmijoConfig cfg;
  RunOptions opt;
  opt.T = 200;
  opt.seed = 5;
  ExpectSameTrace(RunCsgdAsss(obj, cfg, CompressionSpec(8, 8), opt),
                  RunSgdArmijo(obj, cfg, opt));
}

TEST(Csgd, DeterministicGivenSeed) {
  const auto obj = MakeInterpolatedRegression(40, 8, 1.0, 6);
  RunOptions opt;
  opt.T = 300;
  opt.seed = 17;
  ExpectSameTrace(RunCsgdAsss(obj, ArmijoConfig{}, CompressionSpec(2, 8), opt),
                  RunCsgdAsss(obj, ArmijoConfig{}, CompressionSpec(2, 8), opt));
}

TEST(Csgd, PerturbedIdentityHolds) {
  const auto obj = MakeStronglyConvexMix(10, 16, 0.1, 7);
  RunOptions opt;
  opt.T = 500;
  opt.x0 = DenseVector::Ones(16);
  const auto tr = RunCsgdAsss(obj, ArmijoConfig{}, CompressionSpec(3, 16), opt);
  EXPECT_EQ(tr.status, RunStatus::kCompleted);
  EXPECT_LE(tr.max_identity_residual, 1e-9);
}

TEST(Csgd, ScaledRunConvergesOnRegressionFixture) {
  const auto obj = MakeInterpolatedRegression(2000, 256, std::sqrt(10.0), 1);
  ArmijoConfig cfg;
  cfg.omega = 1.5;
  cfg.scale_a = 0.3;
  RunOptions opt;
  opt.batch = 8;
  opt.T = 90 * 2000 / 8;
  opt.track_perturbed = false;
  const auto tr = RunCsgdAsss(obj, cfg, CompressionSpec(3, 256), opt);
  EXPECT_EQ(tr.status, RunStatus::kCompleted);
  EXPECT_LT(tr.final_f, 1e-4 * tr.initial_f);
}

TEST(Csgd, UnscaledRunDivergesAndStops) {
  const auto obj = MakeInterpolatedRegression(2000, 256, std::sqrt(10.0), 1);
  ArmijoConfig cfg;
  cfg.omega = 1.5;
  cfg.scale_a = 1.0;
  RunOptions opt;
  opt.batch = 8;
  opt.T = 50 * 2000 / 8;
  opt.track_perturbed = false;
  const auto tr = RunCsgdAsss(obj, cfg, CompressionSpec(3, 256), opt);
  EXPECT_EQ(tr.status, RunStatus::kDiverged);
  EXPECT_LT(static_cast<std::int64_t>(tr.records.size()), opt.T);
  EXPECT_FALSE(tr.diagnostic.empty());
}

TEST(Nonadaptive, ZeroStepFreezesIterate) {
  const auto obj = MakeInterpolatedRegression(20, 5, 1.0, 3);
  RunOptions opt;
  opt.T = 30;
  opt.x0 = DenseVector::Ones(5);
  const auto tr = RunNonadaptiveCsgd(obj, 0.0, CompressionSpec(2, 5), opt);
  for (const auto& r : tr.records) EXPECT_EQ(r.f_full, tr.initial_f);
  EXPECT_EQ(tr.final_x, *opt.x0);
}

TEST(Nonadaptive, LosslessSmallStepIsMonotone) {
  const auto obj = MakeDiagQuadratic({0.5, 1.0, 2.0});
  // f = sum c_j x_j^2, so L = 4 and every eta below is under 1/L
  RunOptions opt;
  opt.T = 100;
  opt.x0 = DenseVector::Ones(3);
  for (double eta : {0.1, 0.05, 0.01}) {
    const auto tr = RunNonadaptiveCsgd(obj, eta, CompressionSpec(3, 3), opt);
    for (std::size_t t = 1; t < tr.records.size(); ++t)
      EXPECT_LE(tr.records[t].f_full, tr.records[t - 1].f_full);
  }
}

TEST(ScaledGd, BoundaryScaleStillRuns) {
  const auto obj = MakeDiagQuadratic({1.0});
  ArmijoConfig cfg;
  cfg.sigma = 0.1;
  cfg.scale_a = 0.2;
  RunOptions opt;
  opt.T = 10;
  opt.x0 = DenseVector::Ones(1);
  const auto tr = RunScaledGd(obj, cfg, opt);
  EXPECT_EQ(tr.status, RunStatus::kCompleted);
  EXPECT_FALSE(tr.diagnostic.empty());
  EXPECT_FALSE(ScaledGdRate(0.1, 0.8, 0.2, 2.0).has_value());
}

TEST(ScaledGd, AveragedIterateBound) {
  // f(x) = x^2/2 is diag curvature 1/2 in this parameterisation.
  const auto obj = MakeDiagQuadratic({0.5});
  ArmijoConfig cfg;
  cfg.sigma = 0.5;
  cfg.scale_a = 0.5;
  cfg.alpha_max_init = 10.0;
  RunOptions opt;
  opt.T = 200;
  opt.x0 = DenseVector::Constant(1, 3.0);
  opt.store_iterates = true;
  const auto tr = RunScaledGd(obj, cfg, opt);
  const auto avg = AveragedIterates(tr);
  const double c = *ScaledGdRate(cfg.sigma, cfg.rho, cfg.scale_a, obj.L_max());
  for (std::size_t t = 0; t < avg.size(); ++t)
    EXPECT_LE(obj.FullValue(avg[t]), 9.0 * c / static_cast<double>(t + 1));
}

TEST(ScaledGd, ScalingWinsOnAsymmetricQuadratic) {
  std::vector<double> c(10);
  for (int i = 0; i < 10; ++i) c[i] = std::ldexp(1.0, -(i + 1));
  const auto obj = MakeDiagQuadratic(c);
  double f[2];
  int j = 0;
  for (double a : {0.15, 1.0}) {
    ArmijoConfig cfg;
    cfg.scale_a = a;
    cfg.alpha_max_init = 1000.0;
    cfg.policy = AlphaMaxPolicy::kConstant;
    RunOptions opt;
    opt.T = 500;
    opt.x0 = DenseVector::Ones(10);
    f[j++] = RunScaledGd(obj, cfg, opt).final_f;
  }
  EXPECT_LE(f[0], 1e-3 * f[1]);
}

TEST(Averaging, RunningMean) {
  RunTrace tr;
  for (int t = 0; t < 4; ++t) tr.iterates.push_back(DenseVector::Constant(1, t));
  const auto avg = AveragedIterates(tr);
  ASSERT_EQ(avg.size(), 4u);
  EXPECT_DOUBLE_EQ(avg[0][0], 0.0);
  EXPECT_DOUBLE_EQ(avg[2][0], 1.0);
  EXPECT_DOUBLE_EQ(avg[3][0], 1.5);
}

TEST(Tracker, Residual) {
  PerturbedTracker p{DenseVector::Zero(2)};
  DenseVector x(2), m(2);
  x << 1, 2;
  m << 1, 2;
  EXPECT_EQ(p.Residual(x, m), 0.0);
}

}  // namespace
}  // namespace csgd
