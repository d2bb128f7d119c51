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

#include "csgd/experiment.h"

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <ostream>
#include <thread>

#include "csgd/distributed.h"
#include "csgd/optimizers.h"
#include "csgd/rng.h"

namespace csgd {

const char* VerdictName(Verdict v) {
  switch (v) {
    case Verdict::kConverged: return "CONVERGED";
    case Verdict::kDiverged: return "DIVERGED";
    case Verdict::kProgressing: return "PROGRESSING";
    case Verdict::kFailed: return "FAILED";
  }
  return "UNKNOWN";
}

Verdict Classify(const RunTrace& trace) {
  if (trace.status == RunStatus::kFailed) return Verdict::kFailed;
  if (trace.status == RunStatus::kDiverged) return Verdict::kDiverged;
  if (!(trace.final_f <= 10.0 * trace.initial_f)) return Verdict::kDiverged;
  if (trace.final_f < 1e-4 * trace.initial_f) return Verdict::kConverged;
  return Verdict::kProgressing;
}

DenseVector MakeStartPoint(const std::string& x0, int d) {
  if (x0 == "zeros") return DenseVector::Zero(d);
  if (x0 == "ones") return DenseVector::Ones(d);
  if (x0.rfind("gaussian:", 0) == 0) {
    Rng rng(std::strtoull(x0.c_str() + 9, nullptr, 10));
    DenseVector x(d);
    for (int j = 0; j < d; ++j) x[j] = rng.Normal();
    return x;
  }
  throw Error(ErrorCode::kConfig, "unknown x0 '" + x0 + "'");
}

RunTrace RunOne(const FiniteSumObjective& obj, const AlgorithmSpec& alg,
                const RunSpec& run, std::uint64_t seed) {
  RunOptions opt;
  opt.T = run.ResolveT(obj.n(), alg.batch);
  opt.seed = seed;
  opt.batch = alg.batch;
  opt.x0 = MakeStartPoint(run.x0, obj.dim());
  opt.store_iterates = run.store_iterates;
  const CompressionSpec comp(alg.ResolveK(obj.dim()), obj.dim());
  switch (alg.name) {
    case Algorithm::kCsgdAsss:
      return RunCsgdAsss(obj, alg.armijo, comp, opt);
    case Algorithm::kScaledGd:
      return RunScaledGd(obj, alg.armijo, opt);
    case Algorithm::kNonadaptiveCsgd:
      return RunNonadaptiveCsgd(obj, alg.eta_fixed, comp, opt);
    case Algorithm::kSgdArmijo:
      return RunSgdArmijo(obj, alg.armijo, opt);
    case Algorithm::kDcsgdAsss: {
      DistributedOptions d;
      d.num_workers = alg.workers;
      d.run = opt;
      d.parallel = alg.parallel_workers;
      d.max_threads = ThreadBudget();
      return RunDcsgd(obj, alg.armijo, comp, d);
    }
  }
  throw Error(ErrorCode::kInvalidSpec, "unknown algorithm");
}

int ThreadBudget() {
  if (const char* env = std::getenv("CSGD_LAB_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<int>(v);
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

ExperimentResult RunExperiment(const ExperimentConfig& cfg, bool write_files,
                               int threads) {
  const FiniteSumObjective obj = BuildObjective(cfg.objective);
  ExperimentResult res;
  namespace fs = std::filesystem;
  if (write_files) fs::create_directories(cfg.run.output_dir);

  for (const auto& v : cfg.variants) {
    VariantRun vr;
    vr.name = v.name;
    const auto& seeds = cfg.run.seeds;
    vr.runs.resize(seeds.size());
    // Seeds are independent; results land in fixed slots so the output does
    // not depend on scheduling.
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t s; (s = next++) < seeds.size();) {
        vr.runs[s].seed = seeds[s];
        vr.runs[s].trace = RunOne(obj, v.algorithm, cfg.run, seeds[s]);
      }
    };
    const int pool = std::max(1, std::min<int>(threads, seeds.size()));
    if (pool == 1) {
      work();
    } else {
      std::vector<std::future<void>> fut;
      for (int i = 0; i < pool; ++i)
        fut.push_back(std::async(std::launch::async, work));
      for (auto& f : fut) f.get();
    }

    std::vector<RunTrace> traces;
    for (auto& r : vr.runs) {
      if (r.trace.status == RunStatus::kFailed) res.any_failed = true;
      if (!write_files) continue;
      r.csv_path = (fs::path(cfg.run.output_dir) /
                    (v.name + "_seed" + std::to_string(r.seed) + ".csv"))
                       .string();
      std::ofstream out(r.csv_path, std::ios::binary);
      WriteTraceCsv(out, r.trace);
      if (!out) throw Error(ErrorCode::kConfig, "cannot write " + r.csv_path);
    }
    if (write_files) {
      for (const auto& r : vr.runs) traces.push_back(r.trace);
      vr.aggregate_path =
          (fs::path(cfg.run.output_dir) / (v.name + "_aggregate.csv")).string();
      std::ofstream out(vr.aggregate_path, std::ios::binary);
      const std::int64_t per_epoch = std::max<std::int64_t>(
          1, obj.n() / v.algorithm.batch /
                 (v.algorithm.name == Algorithm::kDcsgdAsss
                      ? v.algorithm.workers
                      : 1));
      WriteAggregateCsv(out, traces,
                        v.algorithm.name == Algorithm::kScaledGd ? 1
                                                                 : per_epoch);
    }
    res.variants.push_back(std::move(vr));
  }
  return res;
}

void PrintSummary(std::ostream& os, const ExperimentConfig& cfg,
                  const ExperimentResult& res) {
  os << "config " << cfg.source << '\n';
  for (std::size_t i = 0; i < res.variants.size(); ++i) {
    const auto& vr = res.variants[i];
    const auto& alg = cfg.variants[i].algorithm;
    os << "variant " << vr.name << " (" << AlgorithmName(alg.name)
       << ", a=" << FormatReal(alg.armijo.scale_a) << ")\n";
    int counts[4] = {0, 0, 0, 0};
    double ratio_sum = 0.0;
    for (const auto& r : vr.runs) {
      const Verdict v = Classify(r.trace);
      ++counts[static_cast<int>(v)];
      const double ratio = r.trace.final_f / r.trace.initial_f;
      ratio_sum += ratio;
      os << "  seed " << r.seed << ": " << VerdictName(v)
         << " iters=" << r.trace.records.size()
         << " f0=" << FormatReal(r.trace.initial_f)
         << " fT=" << FormatReal(r.trace.final_f)
         << " ratio=" << FormatReal(ratio);
      if (!r.trace.diagnostic.empty()) os << " [" << r.trace.diagnostic << "]";
      os << '\n';
    }
    os << "  summary: converged=" << counts[0] << " diverged=" << counts[1]
       << " progressing=" << counts[2] << " failed=" << counts[3]
       << " mean_ratio=" << FormatReal(ratio_sum / vr.runs.size()) << '\n';
    if (!vr.aggregate_path.empty())
      os << "  aggregate " << vr.aggregate_path << '\n';
  }
  if (res.variants.size() == 2) {
    // Two-variant presets compare final losses directly.
    auto mean_final = [](const VariantRun& v) {
      double s = 0.0;
      for (const auto& r : v.runs) s += r.trace.final_f;
      return s / v.runs.size();
    };
    const double a = mean_final(res.variants[0]);
    const double b = mean_final(res.variants[1]);
    os << "loss ratio " << res.variants[0].name << "/"
       << res.variants[1].name << " = " << FormatReal(a / b) << '\n';
  }
}

int CliRun(const std::string& config_path, std::ostream& out,
           std::ostream& err) {
  ExperimentConfig cfg;
  try {
    cfg = LoadExperiment(config_path);
    BuildObjective(cfg.objective);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  try {
    const auto res = RunExperiment(cfg, true, ThreadBudget());
    PrintSummary(out, cfg, res);
    if (res.any_failed) {
      err << "error: at least one run halted on an algorithm error\n";
      return 2;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace csgd
