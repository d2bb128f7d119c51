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

#include "csgd/theory.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "csgd/types.h"

namespace csgd {

namespace {

constexpr double kMargin = 1e-12;

void Require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kDomain, what);
}

void CheckSigmaGamma(double sigma, double gamma) {
  Require(sigma > 0.0 && sigma < 1.0, "sigma must lie in (0,1)");
  Require(gamma > 0.0 && gamma <= 1.0, "gamma must lie in (0,1]");
}

// 1 + 1/p + (1 - gamma)(1 + 1/r)
double Denominator(double gamma, double p, double r) {
  return 1.0 + 1.0 / p + (1.0 - gamma) * (1.0 + 1.0 / r);
}

double Load(double gamma, double p, double r) {
  return p + (1.0 - gamma) * (1.0 + r);
}

}  // namespace

double Zeta(double sigma, double gamma) {
  CheckSigmaGamma(sigma, gamma);
  return sigma * gamma / (2.0 - gamma);
}

SzSolution SolveSzProgram(double psi) {
  if (!(psi >= 0.0 && psi < 1.0))
    throw Error(ErrorCode::kInfeasible, "(s,z) program needs psi in [0,1)");
  const double s = (1.0 - psi) / (1.0 + psi);
  return {s, s, (1.0 + psi) * (1.0 + psi) / (1.0 - psi)};
}

std::pair<double, double> PrOptimal(double gamma) {
  Require(gamma > 0.0 && gamma <= 1.0, "gamma must lie in (0,1]");
  const double v = gamma / (2.0 - gamma);
  return {v, v};
}

double A1Tilde(double sigma, double gamma, double p, double r) {
  return 2.0 * sigma / Denominator(gamma, p, r);
}

double A2Tilde(double sigma, double gamma, double a, double p, double r) {
  return 2.0 * a - (a * a / sigma) * Denominator(gamma, p, r);
}

bool PrPredicates(double gamma, double sigma, double epsilon, double p,
                  double r) {
  if (!(p > 0.0 && r > 0.0)) return false;
  const double zeta = Zeta(sigma, gamma);
  return Load(gamma, p, r) < 1.0 - kMargin &&
         A1Tilde(sigma, gamma, p, r) > zeta - epsilon + kMargin;
}

LambdaRange PrEpsilonRange(double gamma, double sigma, double epsilon) {
  const double zeta = Zeta(sigma, gamma);
  Require(epsilon > 0.0 && epsilon < zeta, "epsilon must lie in (0, zeta)");
  const auto [ps, rs] = PrOptimal(gamma);
  auto load_ok = [&](double l) {
    return Load(gamma, l * ps, l * rs) < 1.0 - kMargin;
  };
  auto a1_ok = [&](double l) {
    return A1Tilde(sigma, gamma, l * ps, l * rs) > zeta - epsilon + kMargin;
  };
  // load is increasing in lambda, a1 too; bisect each boundary.
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (load_ok(mid) ? lo : hi) = mid;
  }
  const double upper = lo;
  lo = 0.0;
  hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (a1_ok(mid) ? hi : lo) = mid;
  }
  const double lower = hi;
  if (!(lower <= upper) || !load_ok(upper) || !a1_ok(upper) ||
      !load_ok(lower) || !a1_ok(lower))
    throw Error(ErrorCode::kConstructionFailed,
                "no feasible (p, r) found for the given epsilon");
  return {lower, upper};
}

std::pair<double, double> PrAtLambda(double gamma, double sigma,
                                     double epsilon, double lambda) {
  const auto [ps, rs] = PrOptimal(gamma);
  const double p = lambda * ps, r = lambda * rs;
  if (!PrPredicates(gamma, sigma, epsilon, p, r))
    throw Error(ErrorCode::kConstructionFailed,
                "(p, r) at lambda " + std::to_string(lambda) +
                    " violates the feasibility predicates");
  return {p, r};
}

std::pair<double, double> PrEpsilon(double gamma, double sigma,
                                    double epsilon) {
  const auto range = PrEpsilonRange(gamma, sigma, epsilon);
  return PrAtLambda(gamma, sigma, epsilon, range.hi);
}

std::optional<double> ScaledGdRate(double sigma, double rho, double a,
                                   double L) {
  Require(sigma > 0.0 && sigma < 1.0, "sigma must lie in (0,1)");
  Require(rho > 0.0 && rho <= 1.0, "rho must lie in (0,1]");
  Require(a > 0.0 && L > 0.0, "a and L must be positive");
  const double bracket = 2.0 * a - a * a / sigma;
  if (a >= 2.0 * sigma || !(bracket > 0.0)) return std::nullopt;
  const double alpha_tilde = 2.0 * (1.0 - sigma) / L;
  return 1.0 / (alpha_tilde * rho * bracket);
}

void TheoryInputs::Validate() const {
  CheckSigmaGamma(sigma, gamma);
  Require(rho > 0.0 && rho < 1.0, "rho must lie in (0,1)");
  Require(alpha_max > 0.0, "alpha_max must be positive");
  Require(L_max > 0.0, "L_max must be positive");
  Require(mu_bar >= 0.0, "mu_bar must be nonnegative");
  Require(nu >= 1.0, "nu must be >= 1");
  Require(theta > 0.0, "theta must be positive");
  if (a) Require(*a > 0.0, "a must be positive");
  if (mu_max) Require(*mu_max >= 0.0, "mu_max must be nonnegative");
  if (p || r) Require(p && r && *p > 0.0 && *r > 0.0,
                      "p and r overrides must be given together, positive");
  if (L) Require(*L > 0.0, "L must be positive");
  const double e_nc = eps_nc.value_or(0.5 * gamma);
  Require(e_nc > 0.0 && e_nc < gamma, "eps_nc must lie in (0, gamma)");
  if (p_nc) Require(*p_nc > 0.0, "p_nc must be positive");
  if (r_nc)
    Require(*r_nc > 0.0 && *r_nc <= gamma - e_nc + kMargin,
            "r_nc must lie in (0, gamma - eps_nc]");
  else
    Require(gamma - e_nc > 0.0, "gamma - eps_nc must be positive");
}

void RateConstantsConvex(TheoryReport* rep) {
  const auto& in = rep->in;
  rep->a_hat = rep->zeta - rep->epsilon;
  rep->a1_tilde = A1Tilde(in.sigma, in.gamma, rep->p_eps, rep->r_eps);
  rep->a2_tilde = A2Tilde(in.sigma, in.gamma, rep->a, rep->p_eps, rep->r_eps);
  rep->alpha_tilde_min = 2.0 * (1.0 - in.sigma) / in.L_max;
  rep->delta1 = in.rho * rep->alpha_tilde_min * rep->a2_tilde;
  if (!(rep->delta1 > 0.0)) rep->flags.push_back("vacuous-bound: delta1 <= 0");
  if (rep->a > rep->a_hat)
    rep->flags.push_back("constraint-violated: a > a_hat = zeta - epsilon");
}

void RateConstantsStronglyConvex(TheoryReport* rep) {
  const auto& in = rep->in;
  rep->slack = 1.0 - Load(in.gamma, rep->p_eps, rep->r_eps);
  const double tau = 0.5 * rep->slack;
  rep->mu_max =
      in.mu_max.value_or((rep->slack - tau) / (in.alpha_max * rep->zeta));
  rep->beta1 = rep->mu_max * rep->a * in.alpha_max +
               Load(in.gamma, rep->p_eps, rep->r_eps);
  const double base = in.mu_bar * rep->a * (1.0 - in.sigma) / in.L_max;
  rep->beta2 = 1.0 - base * in.rho;
  rep->beta2_main = 1.0 - base;
  rep->beta_hat = std::max(rep->beta1, rep->beta2);
  if (!(in.mu_bar > 0.0))
    rep->flags.push_back("constraint-violated: mu_bar = 0, no strong convexity");
  if (!(rep->beta_hat < 1.0))
    rep->flags.push_back("vacuous-bound: beta_hat >= 1");
  if (rep->beta2 != rep->beta2_main)
    rep->flags.push_back(
        "note: beta2 uses the proof form with the extra rho; main-text form "
        "reported as beta2_main");
}

double NonconvexDelta(double a, double alpha_max, double sigma, double rho,
                      double L_max, double L, double nu, double G, double p) {
  const double alpha_tilde = 2.0 * (1.0 - sigma) / L_max;
  double eta_min, eta_max;
  if (alpha_max <= alpha_tilde) {
    eta_min = eta_max = a * alpha_max;
  } else {
    eta_min = a * rho * alpha_tilde;
    eta_max = a * alpha_max;
  }
  return eta_max + eta_min * p / (1.0 + p) - nu * (eta_max - eta_min) -
         nu * L * eta_max * eta_max - nu * eta_max * eta_max * G;
}

double NonconvexUpperBound(double a, double sigma, double rho, double L_max,
                           double L, double nu, double G, double p) {
  const double alpha_tilde = 2.0 * (1.0 - sigma) / L_max;
  const double lg = L + G;
  const double disc = (nu - 1.0) * (nu - 1.0) +
                      4.0 * nu * lg * a * (nu + p / (1.0 + p)) * alpha_tilde *
                          rho;
  return (-(nu - 1.0) + std::sqrt(disc)) / (2.0 * a * nu * lg);
}

double NonconvexAHat(double alpha_max, double sigma, double L_max, double L,
                     double nu, double G, double p, double theta, double eps) {
  const double alpha_tilde = 2.0 * (1.0 - sigma) / L_max;
  const double first = (p / (p + 1.0) + 1.0) / (alpha_tilde * nu * (L + G));
  const double second =
      theta * eps / (alpha_max * L * L + alpha_tilde * p * L * L);
  return std::min(first, second);
}

void RateConstantsNonconvex(TheoryReport* rep) {
  const auto& in = rep->in;
  auto& nc = rep->nc;
  nc.L = in.L.value_or(in.L_max);
  nc.eps = in.eps_nc.value_or(0.5 * in.gamma);
  nc.p = in.p_nc.value_or(1.0);
  nc.r = in.r_nc.value_or(in.gamma - nc.eps);
  nc.G = in.theta * (1.0 - in.gamma) * (1.0 + 1.0 / nc.r);
  const double alpha_tilde = 2.0 * (1.0 - in.sigma) / in.L_max;
  nc.case_two = in.alpha_max > alpha_tilde;
  nc.eta_max = rep->a * in.alpha_max;
  nc.eta_min = nc.case_two ? rep->a * in.rho * alpha_tilde : nc.eta_max;
  nc.delta = NonconvexDelta(rep->a, in.alpha_max, in.sigma, in.rho, in.L_max,
                            nc.L, in.nu, nc.G, nc.p);
  nc.a_hat = NonconvexAHat(in.alpha_max, in.sigma, in.L_max, nc.L, in.nu,
                           nc.G, nc.p, in.theta, nc.eps);
  nc.alpha_hat = NonconvexUpperBound(nc.a_hat, in.sigma, in.rho, in.L_max,
                                     nc.L, in.nu, nc.G, nc.p);
  double prev = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 64; ++i) {
    const double ub = NonconvexUpperBound(nc.a_hat * i / 32.0, in.sigma,
                                          in.rho, in.L_max, nc.L, in.nu, nc.G,
                                          nc.p);
    if (!(ub < prev)) nc.ub_decreasing = false;
    prev = ub;
  }
  if (!(nc.delta > 0.0))
    rep->flags.push_back("nonconvex: delta <= 0 at the given a, alpha_max");
  if (!nc.ub_decreasing)
    rep->flags.push_back("nonconvex: UB(a) not decreasing on sampled grid");
  if (nc.case_two && nc.alpha_hat < alpha_tilde)
    rep->flags.push_back(
        "nonconvex: UB(a_hat) < alpha_tilde, no case-2 interval exists");
}

TheoryReport ComputeTheory(const TheoryInputs& in) {
  in.Validate();
  TheoryReport rep;
  rep.in = in;
  rep.zeta = Zeta(in.sigma, in.gamma);
  rep.epsilon = in.epsilon.value_or(0.1 * rep.zeta);
  Require(rep.epsilon > 0.0 && rep.epsilon < rep.zeta,
          "epsilon must lie in (0, zeta)");
  rep.a = in.a.value_or(0.9 * (rep.zeta - rep.epsilon));
  std::tie(rep.p_star, rep.r_star) = PrOptimal(in.gamma);
  if (in.p) {
    rep.p_eps = *in.p;
    rep.r_eps = *in.r;
    if (!PrPredicates(in.gamma, in.sigma, rep.epsilon, rep.p_eps, rep.r_eps))
      rep.flags.push_back(
          "constraint-violated: (p, r) override fails feasibility predicates");
  } else {
    std::tie(rep.p_eps, rep.r_eps) =
        PrEpsilon(in.gamma, in.sigma, rep.epsilon);
  }
  RateConstantsConvex(&rep);
  RateConstantsStronglyConvex(&rep);
  rep.eta_max = rep.a * in.alpha_max;
  rep.eta_min = rep.a * in.rho * std::min(in.alpha_max, rep.alpha_tilde_min);
  rep.scaled_gd_rate = ScaledGdRate(in.sigma, in.rho, rep.a, in.L_max);
  if (!rep.scaled_gd_rate)
    rep.flags.push_back("vacuous-bound: scaled GD rate needs a < 2 sigma");
  RateConstantsNonconvex(&rep);
  return rep;
}

}  // namespace csgd
