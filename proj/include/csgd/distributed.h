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

#ifndef CSGD_DISTRIBUTED_H_
#define CSGD_DISTRIBUTED_H_

#include <cstdint>
#include <vector>

#include "csgd/compression.h"
#include "csgd/linesearch.h"
#include "csgd/objectives.h"
#include "csgd/optimizers.h"
#include "csgd/trace.h"

namespace csgd {

// Sparse update on the wire. Encoding, all little-endian:
//   u32 sender | u64 iteration | u32 count | count x (u32 index, f64 value)
// Indices are strictly increasing and lie in [0, d).
struct SparseMessage {
  std::uint32_t sender = 0;
  std::uint64_t iteration = 0;
  std::vector<std::uint32_t> indices;
  std::vector<double> values;

  std::size_t WireBytes() const { return 16 + 12 * indices.size(); }
};

std::vector<std::uint8_t> EncodeMessage(const SparseMessage& msg);
// Throws kProtocol on truncation, trailing bytes or bad ordering.
SparseMessage DecodeMessage(const std::vector<std::uint8_t>& bytes);
// Bytes of the index/value payload only: count * (4 + 8).
inline std::int64_t PayloadBytes(std::int64_t count) { return count * 12; }

SparseMessage ToMessage(std::uint32_t sender, std::uint64_t iteration,
                        const DenseVector& g, const std::vector<int>& support);
void AddDensified(const SparseMessage& msg, DenseVector* acc);

struct WorkerState {
  std::uint32_t id = 0;
  Shard shard;
  OptimizerState opt;   // x is overwritten by the broadcast each round
};

struct WorkerOutput {
  SparseMessage msg;
  StepRecord rec;
  DenseVector update;   // a * alpha^(k) * grad f^(k)_{i_t}(x_t)
};

// One worker round at the broadcast iterate x_t.
WorkerOutput WorkerStep(const FiniteSumObjective& obj, WorkerState* worker,
                        const DenseVector& x_t, const ArmijoConfig& cfg,
                        const CompressionSpec& comp, int batch);

// x_{t+1} = x_t - (1/N) sum_k densify(g^(k)), summed in worker-id order.
// Requires exactly one message per worker id 0..N-1, all for `iteration`.
DenseVector CentralAggregate(const std::vector<SparseMessage>& messages,
                             const DenseVector& x_t, int num_workers,
                             std::uint64_t iteration);

struct DistributedOptions {
  int num_workers = 2;
  RunOptions run;
  bool parallel = false;     // run worker steps on a thread pool
  int max_threads = 0;       // 0: hardware concurrency
};

// DCSGD-ASSS. Trace rows carry means over workers of f_i, grad_sq, alpha
// and eta; mem_sq is |(1/N) sum_k m^(k)|^2 and i_t is worker 0's sample.
RunTrace RunDcsgd(const FiniteSumObjective& obj, const ArmijoConfig& cfg,
                  const CompressionSpec& comp, const DistributedOptions& opt);

}  // namespace csgd

#endif  // CSGD_DISTRIBUTED_H_
