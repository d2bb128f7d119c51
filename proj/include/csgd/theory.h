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

#ifndef CSGD_THEORY_H_
#define CSGD_THEORY_H_

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace csgd {

// Closed-form constants of the convex, strongly convex and nonconvex rate
// analyses of compressed SGD with Armijo search and scaling.
//
// Notation: sigma, rho Armijo parameters; gamma = k/d; a the scaling factor;
// alpha_tilde = 2(1 - sigma)/L_max, the guaranteed Armijo floor before the
// rho backtrack.

double Zeta(double sigma, double gamma);

struct SzSolution {
  double s_star;
  double z_star;
  double g_min;
};
// argmin 1/s + psi/z  subject to  s + psi(1 + z) <= 1
SzSolution SolveSzProgram(double psi);

std::pair<double, double> PrOptimal(double gamma);

// 2 sigma / (1 + 1/p + (1 - gamma)(1 + 1/r))
double A1Tilde(double sigma, double gamma, double p, double r);
// 2a - (a^2/sigma)(1 + 1/p + (1 - gamma)(1 + 1/r))
double A2Tilde(double sigma, double gamma, double a, double p, double r);

// Feasible scalings lambda of (p*, r*): both
//   p + (1 - gamma)(1 + r) < 1     and     A1Tilde(p, r) > zeta - eps
// hold (with margin 1e-12) exactly for lambda in [lo, hi].
struct LambdaRange {
  double lo;
  double hi;
};
LambdaRange PrEpsilonRange(double gamma, double sigma, double epsilon);
// (lambda p*, lambda r*), both predicates re-verified.
std::pair<double, double> PrAtLambda(double gamma, double sigma,
                                     double epsilon, double lambda);
// Largest feasible lambda.
std::pair<double, double> PrEpsilon(double gamma, double sigma,
                                    double epsilon);
bool PrPredicates(double gamma, double sigma, double epsilon, double p,
                  double r);

// 1 / (alpha_tilde * rho * (2a - a^2/sigma)); nullopt when a >= 2 sigma.
std::optional<double> ScaledGdRate(double sigma, double rho, double a,
                                   double L);

struct TheoryInputs {
  double sigma = 0.1;
  double gamma = 1.0;
  double rho = 0.8;
  std::optional<double> epsilon;    // default 0.1 zeta
  std::optional<double> a;          // default 0.9 (zeta - epsilon)
  double alpha_max = 0.1;
  double L_max = 1.0;
  double mu_bar = 0.0;
  std::optional<double> mu_max;     // default (slack - tau)/(alpha_max zeta)
  std::optional<double> p;          // override (p_eps, r_eps)
  std::optional<double> r;
  // nonconvex
  double nu = 1.0;
  double theta = 1.0;
  std::optional<double> L;          // default L_max
  std::optional<double> eps_nc;     // default gamma / 2
  std::optional<double> p_nc;       // default 1
  std::optional<double> r_nc;       // default gamma - eps_nc

  void Validate() const;
};

struct NonconvexReport {
  double L = 0.0;
  double p = 0.0;
  double r = 0.0;
  double eps = 0.0;
  double G = 0.0;
  double eta_min = 0.0;
  double eta_max = 0.0;
  bool case_two = false;      // alpha_max > alpha_tilde
  double delta = 0.0;
  double a_hat = 0.0;
  double alpha_hat = 0.0;     // UB(a_hat)
  bool ub_decreasing = true;  // sampled on (0, 2 a_hat]
};

struct TheoryReport {
  TheoryInputs in;
  double zeta = 0.0;
  double epsilon = 0.0;
  double a = 0.0;
  double p_star = 0.0, r_star = 0.0;
  double p_eps = 0.0, r_eps = 0.0;
  double a_hat = 0.0;
  double a1_tilde = 0.0;
  double a2_tilde = 0.0;
  double alpha_tilde_min = 0.0;
  double delta1 = 0.0;
  double slack = 0.0;         // 1 - p - (1 - gamma)(1 + r)
  double mu_max = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;         // 1 - mu_bar a (1 - sigma) rho / L_max
  double beta2_main = 0.0;    // 1 - mu_bar a (1 - sigma) / L_max
  double beta_hat = 0.0;
  double eta_min = 0.0;
  double eta_max = 0.0;
  std::optional<double> scaled_gd_rate;
  NonconvexReport nc;
  std::vector<std::string> flags;
};

// Fills delta1, a_hat, a1/a2 tilde from the report's (p_eps, r_eps).
void RateConstantsConvex(TheoryReport* rep);
void RateConstantsStronglyConvex(TheoryReport* rep);
void RateConstantsNonconvex(TheoryReport* rep);

// Everything, in order.
TheoryReport ComputeTheory(const TheoryInputs& in);

// Nonconvex helpers, exposed for the constants-sanity suite.
double NonconvexDelta(double a, double alpha_max, double sigma, double rho,
                      double L_max, double L, double nu, double G, double p);
double NonconvexUpperBound(double a, double sigma, double rho, double L_max,
                           double L, double nu, double G, double p);
double NonconvexAHat(double alpha_max, double sigma, double L_max, double L,
                     double nu, double G, double p, double theta, double eps);

}  // namespace csgd

#endif  // CSGD_THEORY_H_
