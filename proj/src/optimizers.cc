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

#include "csgd/optimizers.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace csgd {

OptimizerState OptimizerState::Initial(const DenseVector& x0,
                                       const ArmijoConfig& cfg,
                                       std::uint64_t seed) {
  OptimizerState s;
  s.x = x0;
  s.mem = DenseVector::Zero(x0.size());
  s.alpha_prev = InitialAlphaPrev(cfg);
  s.rng = Rng(seed);
  return s;
}

double PerturbedTracker::Residual(const DenseVector& x,
                                  const DenseVector& m) const {
  return ((x - x_hat) - m).norm() / (1.0 + m.norm());
}

namespace {

// The first search starts at alpha_max_init itself rather than at
// omega * (alpha_max_init / omega), which can be off by an ulp.
double AlphaMaxFor(const OptimizerState& s, const ArmijoConfig& cfg) {
  if (s.t == 0) return std::min(cfg.alpha_max_init, cfg.alpha_max_cap);
  return NextAlphaMax(s.alpha_prev, cfg);
}

bool Diverged(double f) {
  return !std::isfinite(f) || f > kDivergenceThreshold;
}

double DistSq(const FiniteSumObjective& obj, const DenseVector& x) {
  if (!obj.x_star()) return std::numeric_limits<double>::quiet_NaN();
  return (x - *obj.x_star()).squaredNorm();
}

void Finish(const FiniteSumObjective& obj, const DenseVector& x,
            bool store, RunTrace* trace) {
  trace->final_x = x;
  trace->final_f = obj.FullValue(x);
  trace->final_dist_sq = DistSq(obj, x);
  if (store) trace->iterates.push_back(x);
  if (trace->status == RunStatus::kCompleted && Diverged(trace->final_f)) {
    trace->status = RunStatus::kDiverged;
    trace->diagnostic = "loss " + FormatReal(trace->final_f) +
                        " beyond divergence threshold";
  }
}

DenseVector StartPoint(const FiniteSumObjective& obj, const RunOptions& opt) {
  if (opt.x0) {
    CheckDim(opt.x0->size(), obj.dim(), "x0");
    return *opt.x0;
  }
  return DenseVector::Zero(obj.dim());
}

RunTrace RunStochastic(const FiniteSumObjective& obj, const ArmijoConfig& cfg,
                       const CompressionSpec& comp, const StepMode& mode,
                       const RunOptions& opt) {
  if (mode.adaptive) cfg.Validate();
  comp.Validate();
  CheckDim(comp.d, obj.dim(), "compression");
  if (opt.T < 1) throw Error(ErrorCode::kInvalidSpec, "T must be >= 1");
  if (opt.batch < 1) throw Error(ErrorCode::kInvalidSpec, "batch must be >= 1");

  const DenseVector x0 = StartPoint(obj, opt);
  OptimizerState state = OptimizerState::Initial(x0, cfg, opt.seed);
  PerturbedTracker tracker{x0};
  RunTrace trace;
  trace.records.reserve(static_cast<std::size_t>(opt.T));
  trace.initial_f = obj.FullValue(x0);

  StepOutput out;
  for (std::int64_t t = 0; t < opt.T; ++t) {
    StepRecord rec;
    rec.f_full = obj.FullValue(state.x);
    if (Diverged(rec.f_full)) {
      trace.status = RunStatus::kDiverged;
      trace.diagnostic = "loss " + FormatReal(rec.f_full) + " at t=" +
                         std::to_string(t) + " beyond divergence threshold";
      break;
    }
    rec.dist_sq = DistSq(obj, state.x);
    if (opt.store_iterates) trace.iterates.push_back(state.x);
    try {
      CsgdStep(obj, &state, cfg, comp, mode, opt.batch, Shard{}, &rec, &out);
    } catch (const Error& e) {
      trace.status = RunStatus::kFailed;
      trace.diagnostic = std::string(ErrorCodeName(e.code())) + " at t=" +
                         std::to_string(t) + ": " + e.what();
      break;
    }
    trace.records.push_back(rec);
    if (opt.track_perturbed) {
      tracker.x_hat -= out.update;
      trace.max_identity_residual = std::max(
          trace.max_identity_residual, tracker.Residual(state.x, state.mem));
    }
  }
  Finish(obj, state.x, opt.store_iterates, &trace);
  return trace;
}

}  // namespace

void CsgdStep(const FiniteSumObjective& obj, OptimizerState* state,
              const ArmijoConfig& cfg, const CompressionSpec& comp,
              const StepMode& mode, int batch, const Shard& shard,
              StepRecord* rec, StepOutput* out) {
  const int begin = shard.begin;
  const int size = shard.size < 0 ? obj.n() : shard.size;
  std::vector<int> idx(batch);
  for (int b = 0; b < batch; ++b)
    idx[b] = begin + static_cast<int>(state->rng.UniformIndex(
                         static_cast<std::uint64_t>(size)));

  DenseVector grad;
  const double f_i = obj.BatchValueGrad(idx, state->x, &grad);
  const double gsq = grad.squaredNorm();

  double alpha, eta;
  int backtracks = 0;
  if (!mode.adaptive) {
    alpha = eta = mode.eta_fixed;
  } else if (gsq > 0.0) {
    const double alpha_max = AlphaMaxFor(*state, cfg);
    const auto res = ArmijoSearch(
        [&obj, &idx](const DenseVector& v) { return obj.BatchValue(idx, v); },
        state->x, grad, f_i, alpha_max, cfg);
    alpha = res.alpha;
    eta = res.eta;
    backtracks = res.backtracks;
  } else {
    // Nothing to search along; keep the previous step-size.
    alpha = state->alpha_prev;
    eta = cfg.scale_a * alpha;
  }

  rec->t = state->t;
  rec->i_t = idx[0];
  rec->f_i = f_i;
  rec->grad_sq = gsq;
  rec->alpha = alpha;
  rec->eta = eta;
  rec->mem_sq = state->mem.squaredNorm();
  rec->backtracks = backtracks;

  out->update = eta * grad;
  auto fb = CompressWithFeedback(state->mem, out->update, comp);
  state->x -= fb.g;
  state->mem = std::move(fb.mem);
  out->g = std::move(fb.g);
  out->support = std::move(fb.support);
  state->alpha_prev = alpha;
  state->evals += backtracks;
  ++state->t;
  rec->evals = state->evals;
}

RunTrace RunCsgdAsss(const FiniteSumObjective& obj, const ArmijoConfig& cfg,
                     const CompressionSpec& comp, const RunOptions& opt) {
  return RunStochastic(obj, cfg, comp, StepMode{}, opt);
}

RunTrace RunNonadaptiveCsgd(const FiniteSumObjective& obj, double eta_fixed,
                            const CompressionSpec& comp,
                            const RunOptions& opt) {
  if (!(eta_fixed >= 0.0) || !std::isfinite(eta_fixed))
    throw Error(ErrorCode::kInvalidSpec, "eta_fixed must be nonnegative");
  StepMode mode;
  mode.adaptive = false;
  mode.eta_fixed = eta_fixed;
  return RunStochastic(obj, ArmijoConfig{}, comp, mode, opt);
}

RunTrace RunSgdArmijo(const FiniteSumObjective& obj, const ArmijoConfig& cfg,
                      const RunOptions& opt) {
  return RunCsgdAsss(obj, cfg, CompressionSpec(obj.dim(), obj.dim()), opt);
}

RunTrace RunScaledGd(const FiniteSumObjective& obj, const ArmijoConfig& cfg,
                     const RunOptions& opt) {
  cfg.Validate();
  if (opt.T < 1) throw Error(ErrorCode::kInvalidSpec, "T must be >= 1");
  const DenseVector x0 = StartPoint(obj, opt);
  OptimizerState state = OptimizerState::Initial(x0, cfg, opt.seed);
  RunTrace trace;
  trace.records.reserve(static_cast<std::size_t>(opt.T));
  trace.initial_f = obj.FullValue(x0);
  if (cfg.scale_a >= 2.0 * cfg.sigma)
    trace.diagnostic = "warning: a >= 2 sigma, rate bound is vacuous";
  const ValueFn value = [&obj](const DenseVector& v) {
    return obj.FullValue(v);
  };

  for (std::int64_t t = 0; t < opt.T; ++t) {
    StepRecord rec;
    rec.t = t;
    rec.f_full = rec.f_i = obj.FullValue(state.x);
    if (Diverged(rec.f_full)) {
      trace.status = RunStatus::kDiverged;
      trace.diagnostic = "loss " + FormatReal(rec.f_full) + " at t=" +
                         std::to_string(t) + " beyond divergence threshold";
      break;
    }
    rec.dist_sq = DistSq(obj, state.x);
    if (opt.store_iterates) trace.iterates.push_back(state.x);
    const DenseVector grad = obj.FullGrad(state.x);
    rec.grad_sq = grad.squaredNorm();
    if (rec.grad_sq > 0.0) {
      try {
        const auto res = ArmijoSearch(value, state.x, grad, rec.f_full,
                                      AlphaMaxFor(state, cfg), cfg);
        rec.alpha = res.alpha;
        rec.eta = res.eta;
        rec.backtracks = res.backtracks;
      } catch (const Error& e) {
        trace.status = RunStatus::kFailed;
        trace.diagnostic = std::string(ErrorCodeName(e.code())) + " at t=" +
                           std::to_string(t) + ": " + e.what();
        break;
      }
    } else {
      rec.alpha = state.alpha_prev;
      rec.eta = cfg.scale_a * rec.alpha;
    }
    state.x -= rec.eta * grad;
    state.alpha_prev = rec.alpha;
    state.evals += rec.backtracks;
    ++state.t;
    rec.evals = state.evals;
    trace.records.push_back(rec);
  }
  Finish(obj, state.x, opt.store_iterates, &trace);
  return trace;
}

std::vector<DenseVector> AveragedIterates(const RunTrace& trace) {
  std::vector<DenseVector> out;
  if (trace.iterates.empty()) return out;
  DenseVector sum = DenseVector::Zero(trace.iterates.front().size());
  out.reserve(trace.iterates.size());
  for (std::size_t t = 0; t < trace.iterates.size(); ++t) {
    sum += trace.iterates[t];
    out.push_back(sum / static_cast<double>(t + 1));
  }
  return out;
}

}  // namespace csgd
