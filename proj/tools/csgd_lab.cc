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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "csgd/config.h"
#include "csgd/experiment.h"
#include "csgd/theory.h"
#include "csgd/trace.h"
#include "csgd/verify.h"

#ifndef CSGD_GOLDEN_DIR
#define CSGD_GOLDEN_DIR "tests/golden"
#endif

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kRuntime = 2;
constexpr int kVerifyFailed = 3;

void Row(const std::string& key, double v) {
  std::cout << key << '=' << csgd::FormatReal(v) << '\n';
}

int Theory(const csgd::TheoryInputs& in, bool check) {
  csgd::TheoryReport rep;
  try {
    rep = csgd::ComputeTheory(in);
  } catch (const csgd::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == csgd::ErrorCode::kInvalidSpec ||
                   e.code() == csgd::ErrorCode::kDomain
               ? kUsage
               : kRuntime;
  }
  Row("sigma", in.sigma);
  Row("gamma", in.gamma);
  Row("rho", in.rho);
  Row("zeta", rep.zeta);
  Row("epsilon", rep.epsilon);
  Row("a", rep.a);
  Row("p_star", rep.p_star);
  Row("r_star", rep.r_star);
  Row("p_eps", rep.p_eps);
  Row("r_eps", rep.r_eps);
  Row("a1_tilde", rep.a1_tilde);
  Row("a2_tilde", rep.a2_tilde);
  Row("a_hat", rep.a_hat);
  Row("alpha_tilde_min", rep.alpha_tilde_min);
  Row("delta1", rep.delta1);
  Row("slack", rep.slack);
  Row("mu_max", rep.mu_max);
  Row("beta1", rep.beta1);
  Row("beta2", rep.beta2);
  Row("beta2_main", rep.beta2_main);
  Row("beta_hat", rep.beta_hat);
  Row("eta_min", rep.eta_min);
  Row("eta_max", rep.eta_max);
  if (rep.scaled_gd_rate) Row("scaled_gd_rate", *rep.scaled_gd_rate);
  else std::cout << "scaled_gd_rate=none\n";
  Row("nc_L", rep.nc.L);
  Row("nc_p", rep.nc.p);
  Row("nc_r", rep.nc.r);
  Row("nc_eps", rep.nc.eps);
  Row("nc_G", rep.nc.G);
  Row("nc_eta_min", rep.nc.eta_min);
  Row("nc_eta_max", rep.nc.eta_max);
  std::cout << "nc_case=" << (rep.nc.case_two ? 2 : 1) << '\n';
  Row("nc_delta", rep.nc.delta);
  Row("nc_a_hat", rep.nc.a_hat);
  Row("nc_alpha_hat", rep.nc.alpha_hat);
  std::cout << "nc_ub_decreasing=" << (rep.nc.ub_decreasing ? 1 : 0) << '\n';
  for (const auto& f : rep.flags) std::cout << "flag=" << f << '\n';

  if (!check) return kOk;
  bool ok = true;
  const double psi = 1.0 - in.gamma;
  const auto sol = csgd::SolveSzProgram(psi);
  const double grid = csgd::SzGridOracle(psi);
  const double gap = std::abs(sol.g_min - grid) / sol.g_min;
  std::cout << "check sz_oracle gap=" << csgd::FormatReal(gap)
            << (gap <= 1e-4 ? " PASS" : " FAIL") << '\n';
  ok = ok && gap <= 1e-4;
  const bool pred = csgd::PrPredicates(in.gamma, in.sigma, rep.epsilon,
                                       rep.p_eps, rep.r_eps);
  std::cout << "check pr_predicates " << (pred ? "PASS" : "FAIL") << '\n';
  ok = ok && pred;
  const double a1 = csgd::A1Tilde(in.sigma, in.gamma, rep.p_star, rep.r_star);
  const bool zeta_ok = std::abs(a1 - rep.zeta) <= 1e-12 * rep.zeta;
  std::cout << "check a1_at_optimum " << (zeta_ok ? "PASS" : "FAIL") << '\n';
  ok = ok && zeta_ok;
  return ok ? kOk : kVerifyFailed;
}

int Verify(bool quick, const std::string& fault, const std::string& golden) {
  csgd::SuiteOptions o;
  o.quick = quick;
  o.golden_dir = golden;
  if (fault == "no-scaling") {
    o.disable_scaling = true;
  } else if (!fault.empty()) {
    std::cerr << "error: unknown fault '" << fault << "'\n";
    return kUsage;
  }
  int failed = 0;
  for (const auto& r : csgd::RunSuite(o)) {
    char head[64];
    std::snprintf(head, sizeof(head), "[%s] %2d ", r.pass ? "PASS" : "FAIL",
                  r.id);
    std::printf("%s%s: %s (%.2fs)\n", head, r.name.c_str(), r.detail.c_str(),
                r.seconds);
    std::fflush(stdout);
    if (!r.pass) ++failed;
  }
  std::printf("%d/12 criteria passed\n", 12 - failed);
  return failed ? kVerifyFailed : kOk;
}

int Sweep(const std::string& path, const std::string& param,
          const std::string& values) {
  const auto dot = param.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == param.size()) {
    std::cerr << "error: --param must look like section.key\n";
    return kUsage;
  }
  const std::string section = param.substr(0, dot);
  const std::string key = param.substr(dot + 1);
  const auto list = csgd::SplitList(values);
  if (list.empty()) {
    std::cerr << "error: --values is empty\n";
    return kUsage;
  }
  std::vector<csgd::ExperimentConfig> configs;
  try {
    const auto raw = csgd::LoadConfigFile(path);
    const auto base = csgd::BuildConfig(raw).run.output_dir;
    for (const auto& v : list) {
      auto copy = raw;
      copy.Set(section, key, v);
      copy.Set("run", "output_dir",
               (std::filesystem::path(base) / (key + "=" + v)).string());
      configs.push_back(csgd::BuildConfig(copy));
      csgd::BuildObjective(configs.back().objective);
    }
  } catch (const csgd::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  bool any_failed = false;
  try {
    for (std::size_t i = 0; i < configs.size(); ++i) {
      std::cout << "== " << param << " = " << list[i] << '\n';
      const auto res =
          csgd::RunExperiment(configs[i], true, csgd::ThreadBudget());
      csgd::PrintSummary(std::cout, configs[i], res);
      any_failed = any_failed || res.any_failed;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  if (any_failed) {
    std::cerr << "error: at least one run halted on an algorithm error\n";
    return kRuntime;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"compressed SGD with scaled Armijo step sizes"};
  app.require_subcommand(1);

  std::string run_path;
  auto* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("config", run_path, "config file")->required();

  csgd::TheoryInputs in;
  std::optional<double> epsilon, a, mu_max, p, r, L, eps_nc, p_nc, r_nc;
  bool check = false;
  auto* th = app.add_subcommand("theory", "print step-size and rate constants");
  th->add_option("--sigma", in.sigma, "Armijo constant")->capture_default_str();
  th->add_option("--gamma", in.gamma, "k/d")->capture_default_str();
  th->add_option("--rho", in.rho, "backtracking factor")->capture_default_str();
  th->add_option("--epsilon", epsilon, "margin below zeta (default 0.1 zeta)");
  th->add_option("--a", a, "scaling (default 0.9 (zeta - epsilon))");
  th->add_option("--alpha-max", in.alpha_max)->capture_default_str();
  th->add_option("--L-max", in.L_max)->capture_default_str();
  th->add_option("--mu-bar", in.mu_bar)->capture_default_str();
  th->add_option("--mu-max", mu_max);
  th->add_option("--p", p, "override p");
  th->add_option("--r", r, "override r");
  th->add_option("--nu", in.nu)->capture_default_str();
  th->add_option("--theta", in.theta)->capture_default_str();
  th->add_option("--L", L, "smoothness of f (default L-max)");
  th->add_option("--eps-nc", eps_nc);
  th->add_option("--p-nc", p_nc);
  th->add_option("--r-nc", r_nc);
  th->add_flag("--check", check, "cross-check against brute-force oracles");

  bool quick = false;
  std::string fault, golden = CSGD_GOLDEN_DIR;
  auto* ver = app.add_subcommand("verify", "run the acceptance checks");
  ver->add_flag("--quick", quick, "fewer seeds and samples");
  ver->add_option("--inject-fault", fault, "no-scaling");
  ver->add_option("--golden-dir", golden)->capture_default_str();

  std::string sweep_path, param, values;
  auto* sw = app.add_subcommand("sweep", "run a config over parameter values");
  sw->add_option("config", sweep_path)->required();
  sw->add_option("--param", param, "section.key")->required();
  sw->add_option("--values", values, "comma separated")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (*run) return csgd::CliRun(run_path, std::cout, std::cerr);
  if (*th) {
    in.epsilon = epsilon;
    in.a = a;
    in.mu_max = mu_max;
    in.p = p;
    in.r = r;
    in.L = L;
    in.eps_nc = eps_nc;
    in.p_nc = p_nc;
    in.r_nc = r_nc;
    return Theory(in, check);
  }
  if (*ver) return Verify(quick, fault, golden);
  if (*sw) return Sweep(sweep_path, param, values);
  return kUsage;
}
