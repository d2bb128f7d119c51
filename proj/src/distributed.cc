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

#include "csgd/distributed.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <future>
#include <thread>

namespace csgd {

namespace {

void PutU32(std::vector<std::uint8_t>* out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out->push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

void PutU64(std::vector<std::uint8_t>* out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out->push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  std::uint64_t Get(int width) {
    if (pos_ + width > bytes_.size())
      throw Error(ErrorCode::kProtocol, "message truncated");
    std::uint64_t v = 0;
    for (int b = 0; b < width; ++b)
      v |= static_cast<std::uint64_t>(bytes_[pos_ + b]) << (8 * b);
    pos_ += width;
    return v;
  }
  bool Done() const { return pos_ == bytes_.size(); }

 private:
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

void CheckOrdering(const SparseMessage& msg) {
  if (msg.indices.size() != msg.values.size())
    throw Error(ErrorCode::kProtocol, "index/value count mismatch");
  for (std::size_t j = 1; j < msg.indices.size(); ++j)
    if (msg.indices[j] <= msg.indices[j - 1])
      throw Error(ErrorCode::kProtocol, "indices not strictly increasing");
}

}  // namespace

std::vector<std::uint8_t> EncodeMessage(const SparseMessage& msg) {
  CheckOrdering(msg);
  std::vector<std::uint8_t> out;
  out.reserve(msg.WireBytes());
  PutU32(&out, msg.sender);
  PutU64(&out, msg.iteration);
  PutU32(&out, static_cast<std::uint32_t>(msg.indices.size()));
  for (std::size_t j = 0; j < msg.indices.size(); ++j) {
    PutU32(&out, msg.indices[j]);
    PutU64(&out, std::bit_cast<std::uint64_t>(msg.values[j]));
  }
  return out;
}

SparseMessage DecodeMessage(const std::vector<std::uint8_t>& bytes) {
  Reader in(bytes);
  SparseMessage msg;
  msg.sender = static_cast<std::uint32_t>(in.Get(4));
  msg.iteration = in.Get(8);
  const std::uint64_t count = in.Get(4);
  if (count * 12 > bytes.size())
    throw Error(ErrorCode::kProtocol, "message truncated");
  msg.indices.reserve(count);
  msg.values.reserve(count);
  for (std::uint64_t j = 0; j < count; ++j) {
    msg.indices.push_back(static_cast<std::uint32_t>(in.Get(4)));
    msg.values.push_back(std::bit_cast<double>(in.Get(8)));
  }
  if (!in.Done()) throw Error(ErrorCode::kProtocol, "trailing bytes");
  CheckOrdering(msg);
  return msg;
}

SparseMessage ToMessage(std::uint32_t sender, std::uint64_t iteration,
                        const DenseVector& g, const std::vector<int>& support) {
  SparseMessage msg;
  msg.sender = sender;
  msg.iteration = iteration;
  msg.indices.reserve(support.size());
  msg.values.reserve(support.size());
  for (int j : support) {
    msg.indices.push_back(static_cast<std::uint32_t>(j));
    msg.values.push_back(g[j]);
  }
  return msg;
}

void AddDensified(const SparseMessage& msg, DenseVector* acc) {
  for (std::size_t j = 0; j < msg.indices.size(); ++j) {
    if (msg.indices[j] >= acc->size())
      throw Error(ErrorCode::kProtocol, "index beyond dimension");
    (*acc)[msg.indices[j]] += msg.values[j];
  }
}

WorkerOutput WorkerStep(const FiniteSumObjective& obj, WorkerState* worker,
                        const DenseVector& x_t, const ArmijoConfig& cfg,
                        const CompressionSpec& comp, int batch) {
  CheckDim(x_t.size(), obj.dim(), "worker broadcast");
  WorkerOutput out;
  StepOutput step;
  worker->opt.x = x_t;
  const auto t = static_cast<std::uint64_t>(worker->opt.t);
  try {
    CsgdStep(obj, &worker->opt, cfg, comp, StepMode{}, batch, worker->shard,
             &out.rec, &step);
  } catch (const SearchFailedError& e) {
    throw SearchFailedError(
        "worker " + std::to_string(worker->id) + ": " + e.what(),
        e.last_candidate());
  } catch (const Error& e) {
    throw Error(e.code(),
                "worker " + std::to_string(worker->id) + ": " + e.what());
  }
  out.msg = ToMessage(worker->id, t, step.g, step.support);
  out.update = std::move(step.update);
  return out;
}

DenseVector CentralAggregate(const std::vector<SparseMessage>& messages,
                             const DenseVector& x_t, int num_workers,
                             std::uint64_t iteration) {
  if (static_cast<int>(messages.size()) != num_workers)
    throw Error(ErrorCode::kProtocol,
                "expected " + std::to_string(num_workers) + " messages, got " +
                    std::to_string(messages.size()));
  std::vector<const SparseMessage*> by_id(num_workers, nullptr);
  for (const auto& m : messages) {
    if (m.sender >= static_cast<std::uint32_t>(num_workers))
      throw Error(ErrorCode::kProtocol, "unknown worker id");
    if (by_id[m.sender])
      throw Error(ErrorCode::kProtocol,
                  "duplicate message from worker " + std::to_string(m.sender));
    if (m.iteration != iteration)
      throw Error(ErrorCode::kProtocol, "message for wrong iteration");
    by_id[m.sender] = &m;
  }
  DenseVector sum = DenseVector::Zero(x_t.size());
  for (const auto* m : by_id) AddDensified(*m, &sum);
  return x_t - sum / static_cast<double>(num_workers);
}

RunTrace RunDcsgd(const FiniteSumObjective& obj, const ArmijoConfig& cfg,
                  const CompressionSpec& comp, const DistributedOptions& opt) {
  cfg.Validate();
  comp.Validate();
  CheckDim(comp.d, obj.dim(), "compression");
  const int N = opt.num_workers;
  const auto& ro = opt.run;
  if (N < 1) throw Error(ErrorCode::kInvalidSpec, "need at least one worker");
  if (obj.n() % N != 0)
    throw Error(ErrorCode::kInvalidSpec,
                "n=" + std::to_string(obj.n()) + " not divisible by N=" +
                    std::to_string(N));
  if (ro.T < 1) throw Error(ErrorCode::kInvalidSpec, "T must be >= 1");
  if (ro.batch < 1) throw Error(ErrorCode::kInvalidSpec, "batch must be >= 1");

  DenseVector x = DenseVector::Zero(obj.dim());
  if (ro.x0) {
    CheckDim(ro.x0->size(), obj.dim(), "x0");
    x = *ro.x0;
  }
  const int M = obj.n() / N;
  std::vector<WorkerState> workers(N);
  for (int k = 0; k < N; ++k) {
    workers[k].id = static_cast<std::uint32_t>(k);
    workers[k].shard = Shard{k * M, M};
    workers[k].opt = OptimizerState::Initial(x, cfg, DeriveSeed(ro.seed, k));
  }

  RunTrace trace;
  trace.distributed = true;
  trace.initial_f = obj.FullValue(x);
  trace.records.reserve(static_cast<std::size_t>(ro.T));
  DenseVector x_hat = x;
  const int threads = opt.max_threads > 0
                          ? opt.max_threads
                          : std::max(1u, std::thread::hardware_concurrency());
  std::vector<WorkerOutput> outs(N);
  std::int64_t evals = 0;

  for (std::int64_t t = 0; t < ro.T; ++t) {
    StepRecord rec;
    rec.t = t;
    rec.f_full = obj.FullValue(x);
    if (!std::isfinite(rec.f_full) || rec.f_full > kDivergenceThreshold) {
      trace.status = RunStatus::kDiverged;
      trace.diagnostic = "loss " + FormatReal(rec.f_full) + " at t=" +
                         std::to_string(t) + " beyond divergence threshold";
      break;
    }
    rec.dist_sq = obj.x_star()
                      ? (x - *obj.x_star()).squaredNorm()
                      : std::numeric_limits<double>::quiet_NaN();
    if (ro.store_iterates) trace.iterates.push_back(x);

    DenseVector mem_mean = DenseVector::Zero(obj.dim());
    for (const auto& w : workers) mem_mean += w.opt.mem;
    mem_mean /= static_cast<double>(N);
    rec.mem_sq = mem_mean.squaredNorm();

    try {
      if (opt.parallel && N > 1 && threads > 1) {
        for (int start = 0; start < N; start += threads) {
          const int stop = std::min(N, start + threads);
          std::vector<std::future<WorkerOutput>> fut;
          for (int k = start; k < stop; ++k)
            fut.push_back(std::async(std::launch::async, [&, k] {
              return WorkerStep(obj, &workers[k], x, cfg, comp, ro.batch);
            }));
          for (int k = start; k < stop; ++k) outs[k] = fut[k - start].get();
        }
      } else {
        for (int k = 0; k < N; ++k)
          outs[k] = WorkerStep(obj, &workers[k], x, cfg, comp, ro.batch);
      }
    } catch (const Error& e) {
      trace.status = RunStatus::kFailed;
      trace.diagnostic = std::string(ErrorCodeName(e.code())) + " at t=" +
                         std::to_string(t) + ": " + e.what();
      break;
    }

    // Simulate the wire: every message is encoded and decoded.
    std::vector<SparseMessage> inbox;
    inbox.reserve(N);
    std::vector<double> alphas(N);
    double f_i = 0.0, gsq = 0.0, alpha = 0.0, eta = 0.0;
    DenseVector upd_sum = DenseVector::Zero(obj.dim());
    for (int k = 0; k < N; ++k) {
      inbox.push_back(DecodeMessage(EncodeMessage(outs[k].msg)));
      rec.bytes_up += PayloadBytes(static_cast<std::int64_t>(
          outs[k].msg.indices.size()));
      const auto& r = outs[k].rec;
      f_i += r.f_i;
      gsq += r.grad_sq;
      alpha += r.alpha;
      eta += r.eta;
      rec.backtracks += r.backtracks;
      evals += r.backtracks;
      alphas[k] = r.alpha;
      upd_sum += outs[k].update;
    }
    const double inv = 1.0 / N;
    rec.i_t = outs[0].rec.i_t;
    rec.f_i = f_i * inv;
    rec.grad_sq = gsq * inv;
    rec.alpha = alpha * inv;
    rec.eta = eta * inv;
    rec.evals = evals;
    rec.bytes_down = static_cast<std::int64_t>(obj.dim()) * 8;
    rec.worker_alpha_min = *std::min_element(alphas.begin(), alphas.end());
    rec.worker_alpha_max = *std::max_element(alphas.begin(), alphas.end());
    trace.worker_alphas.push_back(std::move(alphas));

    x = CentralAggregate(inbox, x, N, static_cast<std::uint64_t>(t));
    x_hat -= upd_sum / static_cast<double>(N);
    trace.records.push_back(rec);

    DenseVector m_new = DenseVector::Zero(obj.dim());
    for (const auto& w : workers) m_new += w.opt.mem;
    m_new /= static_cast<double>(N);
    trace.max_identity_residual =
        std::max(trace.max_identity_residual,
                 ((x - x_hat) - m_new).norm() / (1.0 + x.norm()));
  }

  trace.final_x = x;
  trace.final_f = obj.FullValue(x);
  trace.final_dist_sq = obj.x_star() ? (x - *obj.x_star()).squaredNorm()
                                     : std::numeric_limits<double>::quiet_NaN();
  if (ro.store_iterates) trace.iterates.push_back(x);
  if (trace.status == RunStatus::kCompleted &&
      (!std::isfinite(trace.final_f) || trace.final_f > kDivergenceThreshold)) {
    trace.status = RunStatus::kDiverged;
    trace.diagnostic = "final loss beyond divergence threshold";
  }
  return trace;
}

}  // namespace csgd
