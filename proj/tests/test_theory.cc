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
#include <limits>

#include "csgd/rng.h"
#include "csgd/theory.h"
#include "csgd/types.h"
#include "csgd/verify.h"

namespace csgd {
namespace {

bool HasFlag(const TheoryReport& rep, const std::string& prefix) {
  for (const auto& f : rep.flags)
    if (f.rfind(prefix, 0) == 0) return true;
  return false;
}

TEST(Zeta, Values) {
  EXPECT_EQ(Zeta(0.1, 1.0), 0.1);
  EXPECT_EQ(Zeta(0.37, 1.0), 0.37);
  EXPECT_NEAR(Zeta(0.1, 0.01), 5.0251256281407e-4, 1e-15);
  double prev = 0.0;
  for (int i = 1; i <= 100; ++i) {
    const double z = Zeta(0.3, i / 100.0);
    EXPECT_GT(z, prev);
    prev = z;
  }
  EXPECT_LT(Zeta(0.3, 1e-9), 1e-9);
  EXPECT_THROW(Zeta(0.0, 0.5), Error);
  EXPECT_THROW(Zeta(0.5, 0.0), Error);
}

TEST(SzProgram, ClosedForm) {
  auto s = SolveSzProgram(0.5);
  EXPECT_NEAR(s.s_star, 1.0 / 3, 1e-15);
  EXPECT_NEAR(s.z_star, 1.0 / 3, 1e-15);
  EXPECT_NEAR(s.g_min, 4.5, 1e-12);
  s = SolveSzProgram(0.0);
  EXPECT_EQ(s.s_star, 1.0);
  EXPECT_EQ(s.g_min, 1.0);
  s = SolveSzProgram(0.9);
  EXPECT_NEAR(s.s_star, 1.0 / 19, 1e-15);
  EXPECT_NEAR(s.g_min, 36.1, 1e-10);
  try {
    SolveSzProgram(1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInfeasible);
  }
}

TEST(SzProgram, GridOracleAgrees) {
  for (double psi : {0.0, 0.5, 0.9}) {
    const double g = SolveSzProgram(psi).g_min;
    EXPECT_NEAR(SzGridOracle(psi), g, 1e-6 * g * 100);
    EXPECT_GE(SzGridOracle(psi), g * (1 - 1e-12));
  }
}

TEST(PrOptimal, HalfCompression) {
  const auto [p, r] = PrOptimal(0.5);
  EXPECT_NEAR(p, 1.0 / 3, 1e-15);
  EXPECT_NEAR(r, 1.0 / 3, 1e-15);
  // denominator 1 + 3 + 0.5 * 4 = 6
  EXPECT_NEAR(A1Tilde(0.1, 0.5, p, r), 1.0 / 30, 1e-15);
  EXPECT_NEAR(A1Tilde(0.1, 0.5, p, r), Zeta(0.1, 0.5), 1e-15);
}

TEST(PrOptimal, ZetaConsistencyRandom) {
  Rng rng(77);
  for (int i = 0; i < 50; ++i) {
    const double s = 0.01 + 0.98 * rng.Uniform();
    const double g = 0.01 + 0.99 * rng.UniformPositive();
    const auto [p, r] = PrOptimal(g);
    EXPECT_NEAR(A1Tilde(s, g, p, r) / Zeta(s, g), 1.0, 1e-12);
  }
}

TEST(PrEpsilon, SatisfiesPredicates) {
  auto [p, r] = PrEpsilon(0.5, 0.1, 0.01);
  EXPECT_TRUE(PrPredicates(0.5, 0.1, 0.01, p, r));
  EXPECT_GT(A1Tilde(0.1, 0.5, p, r), 1.0 / 30 - 0.01);
  EXPECT_LT(p + 0.5 * (1 + r), 1.0);
  // epsilon close to zeta
  const double z = Zeta(0.2, 0.3);
  std::tie(p, r) = PrEpsilon(0.3, 0.2, 0.999 * z);
  EXPECT_TRUE(PrPredicates(0.3, 0.2, 0.999 * z, p, r));
  // gamma = 1
  std::tie(p, r) = PrEpsilon(1.0, 0.4, 0.05);
  EXPECT_LT(p, 1.0);
  EXPECT_GT(2 * 0.4 / (1 + 1 / p), 0.4 - 0.05);
}

TEST(PrEpsilon, RangeEndpointsFeasible) {
  const auto range = PrEpsilonRange(0.25, 0.1, 0.1 * Zeta(0.1, 0.25));
  EXPECT_LT(range.lo, range.hi);
  EXPECT_LE(range.hi, 1.0);
  for (double l : {range.lo, 0.5 * (range.lo + range.hi), range.hi})
    EXPECT_NO_THROW(PrAtLambda(0.25, 0.1, 0.1 * Zeta(0.1, 0.25), l));
  EXPECT_THROW(PrEpsilonRange(0.25, 0.1, 2 * Zeta(0.1, 0.25)), Error);
}

TEST(Convex, AtA1TildeDeltaVanishes) {
  TheoryInputs in;
  in.sigma = 0.5;
  in.gamma = 1.0;
  in.p = 1.0;
  in.r = 1.0;
  in.a = 0.5;
  const auto rep = ComputeTheory(in);
  EXPECT_EQ(rep.a1_tilde, 0.5);
  EXPECT_EQ(rep.delta1, 0.0);
  EXPECT_TRUE(HasFlag(rep, "vacuous-bound"));
}

TEST(Convex, LosslessHandArithmetic) {
  TheoryInputs in;
  in.sigma = 0.5;
  in.gamma = 1.0;
  in.p = 1.0;
  in.r = 1.0;
  in.a = 0.25;
  in.L_max = 2.0;
  const auto rep = ComputeTheory(in);
  EXPECT_NEAR(rep.a2_tilde, 0.25, 1e-15);
  EXPECT_NEAR(rep.delta1, 0.8 * (2 * 0.5 / 2.0) * 0.25, 1e-15);
}

TEST(Convex, IndependentFormula) {
  TheoryInputs in;
  in.sigma = 0.1;
  in.gamma = 0.5;
  in.epsilon = 0.005;
  const auto rep = ComputeTheory(in);
  const double z = 0.1 * 0.5 / 1.5;
  const double a = 0.9 * (z - 0.005);
  EXPECT_NEAR(rep.a, a, 1e-15);
  const double p = rep.p_eps, r = rep.r_eps, s = 0.1;
  const double bracket = 2 * a - a * a / s - a * a / (s * p) -
                         0.5 * (1 + 1 / r) * a * a / s;
  EXPECT_NEAR(rep.delta1, 0.8 * (2 * 0.9 / 1.0) * bracket, 1e-15);
  EXPECT_GT(rep.delta1, 0.0);
  EXPECT_NEAR(rep.a_hat, z - 0.005, 1e-15);
  EXPECT_FALSE(HasFlag(rep, "constraint-violated: a >"));
}

TEST(Convex, LargeAIsFlagged) {
  TheoryInputs in;
  in.sigma = 0.1;
  in.gamma = 0.5;
  in.a = 0.5;
  EXPECT_TRUE(HasFlag(ComputeTheory(in), "constraint-violated: a >"));
}

TEST(StronglyConvex, NoStrongConvexityFlagged) {
  TheoryInputs in;
  in.mu_bar = 0.0;
  const auto rep = ComputeTheory(in);
  EXPECT_EQ(rep.beta2, 1.0);
  EXPECT_GE(rep.beta_hat, 1.0);
  EXPECT_TRUE(HasFlag(rep, "constraint-violated: mu_bar"));
}

TEST(StronglyConvex, LosslessBeta1BelowOne) {
  TheoryInputs in;
  in.sigma = 0.3;
  in.gamma = 1.0;
  in.mu_bar = 0.5;
  const auto rep = ComputeTheory(in);
  EXPECT_NEAR(rep.beta1, rep.mu_max * rep.a * in.alpha_max + rep.p_eps, 1e-15);
  EXPECT_LT(rep.beta1, 1.0);
  EXPECT_LT(rep.beta_hat, 1.0);
  EXPECT_NEAR(rep.beta2,
              1 - 0.5 * rep.a * 0.7 * in.rho / in.L_max, 1e-15);
  EXPECT_NEAR(rep.beta2_main, 1 - 0.5 * rep.a * 0.7 / in.L_max, 1e-15);
}

TEST(Nonconvex, CaseOneClosedForm) {
  // alpha_max below alpha_tilde: eta_min = eta_max = eta
  const double a = 0.05, am = 0.5, s = 0.1, rho = 0.8, Lm = 1.0, L = 0.7,
               nu = 1.5, G = 0.3, p = 2.0;
  const double eta = a * am;
  const double expect =
      eta * (1 + p / (1 + p)) - nu * (L * eta * eta + eta * eta * G);
  EXPECT_NEAR(NonconvexDelta(a, am, s, rho, Lm, L, nu, G, p), expect, 1e-15);
}

TEST(Nonconvex, LosslessDropsCompressionTerm) {
  TheoryInputs in;
  in.gamma = 1.0;
  const auto rep = ComputeTheory(in);
  EXPECT_EQ(rep.nc.G, 0.0);
}

TEST(Nonconvex, UpperBoundDecreasing) {
  double prev = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 100; ++i) {
    const double ub = NonconvexUpperBound(0.01 * i, 0.1, 0.8, 1.0, 1.0, 2.0,
                                          0.5, 1.0);
    EXPECT_LT(ub, prev);
    prev = ub;
  }
  TheoryInputs in;
  in.gamma = 0.25;
  EXPECT_TRUE(ComputeTheory(in).nc.ub_decreasing);
}

TEST(ScaledGdRate, Values) {
  EXPECT_NEAR(*ScaledGdRate(0.5, 1.0, 0.5, 1.0), 2.0, 1e-15);
  const double s = 0.2, rho = 0.7, L = 3.0;
  EXPECT_NEAR(*ScaledGdRate(s, rho, s, L), L / (2 * (1 - s) * rho * s),
              1e-12);
  EXPECT_FALSE(ScaledGdRate(0.1, 0.8, 0.2, 1.0).has_value());
}

TEST(Inputs, Validation) {
  TheoryInputs in;
  in.sigma = 1.5;
  EXPECT_THROW(ComputeTheory(in), Error);
  in = TheoryInputs{};
  in.p = 0.5;
  EXPECT_THROW(ComputeTheory(in), Error);
  in = TheoryInputs{};
  in.epsilon = 1.0;
  EXPECT_THROW(ComputeTheory(in), Error);
}

}  // namespace
}  // namespace csgd
