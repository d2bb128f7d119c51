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

#include <cstring>

#include "csgd/distributed.h"
#include "csgd/rng.h"

namespace csgd {
namespace {

bool SameBits(double a, double b) { return std::memcmp(&a, &b, 8) == 0; }

SparseMessage Msg(std::uint32_t sender, std::uint64_t it,
                  std::vector<std::uint32_t> idx, std::vector<double> val) {
  SparseMessage m;
  m.sender = sender;
  m.iteration = it;
  m.indices = std::move(idx);
  m.values = std::move(val);
  return m;
}

TEST(Codec, LayoutIsLittleEndian) {
  const auto bytes = EncodeMessage(Msg(1, 2, {3}, {1.0}));
  ASSERT_EQ(bytes.size(), 28u);
  EXPECT_EQ(bytes[0], 1);
  EXPECT_EQ(bytes[4], 2);
  EXPECT_EQ(bytes[12], 1);
  EXPECT_EQ(bytes[16], 3);
  // 1.0 = 0x3ff0000000000000
  EXPECT_EQ(bytes[26], 0xf0);
  EXPECT_EQ(bytes[27], 0x3f);
}

TEST(Codec, RoundTrip) {
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    SparseMessage m;
    m.sender = static_cast<std::uint32_t>(rng.UniformIndex(64));
    m.iteration = rng.NextU64();
    std::uint32_t j = 0;
    for (int c = 0; c < 20; ++c) {
      j += 1 + static_cast<std::uint32_t>(rng.UniformIndex(5));
      m.indices.push_back(j);
      m.values.push_back(rng.Normal());
    }
    const auto back = DecodeMessage(EncodeMessage(m));
    EXPECT_EQ(back.indices, m.indices);
    for (std::size_t c = 0; c < m.values.size(); ++c)
      EXPECT_TRUE(SameBits(back.values[c], m.values[c]));
  }
}

TEST(Codec, RejectsMalformed) {
  auto bytes = EncodeMessage(Msg(0, 0, {1, 4}, {1.0, 2.0}));
  auto cut = bytes;
  cut.pop_back();
  EXPECT_THROW(DecodeMessage(cut), Error);
  auto extra = bytes;
  extra.push_back(0);
  EXPECT_THROW(DecodeMessage(extra), Error);
  EXPECT_THROW(EncodeMessage(Msg(0, 0, {4, 1}, {1.0, 2.0})), Error);
  EXPECT_THROW(EncodeMessage(Msg(0, 0, {1, 1}, {1.0, 2.0})), Error);
}

TEST(Aggregate, ZeroMessagesKeepIterate) {
  DenseVector x = DenseVector::Constant(3, 2.0);
  const auto y = CentralAggregate({Msg(0, 5, {}, {}), Msg(1, 5, {}, {})}, x, 2, 5);
  EXPECT_EQ(y, x);
}

TEST(Aggregate, Averages) {
  DenseVector x = DenseVector::Zero(2);
  const auto y = CentralAggregate(
      {Msg(1, 0, {1}, {4.0}), Msg(0, 0, {0}, {2.0})}, x, 2, 0);
  EXPECT_EQ(y[0], -1.0);
  EXPECT_EQ(y[1], -2.0);
}

TEST(Aggregate, MatchesDenseReference) {
  Rng rng(3);
  const int d = 9, N = 3;
  DenseVector x(d), ref(d);
  for (int j = 0; j < d; ++j) x[j] = rng.Normal();
  std::vector<SparseMessage> msgs;
  std::vector<DenseVector> dense(N, DenseVector::Zero(d));
  for (int k = 0; k < N; ++k) {
    SparseMessage m = Msg(k, 7, {}, {});
    for (int j = 0; j < d; j += 1 + k) {
      const double v = rng.Normal();
      m.indices.push_back(j);
      m.values.push_back(v);
      dense[k][j] = v;
    }
    msgs.push_back(m);
  }
  for (int j = 0; j < d; ++j) {
    double s = 0.0;
    for (int k = 0; k < N; ++k) s += dense[k][j];
    ref[j] = x[j] - s / N;
  }
  EXPECT_LE((CentralAggregate(msgs, x, N, 7) - ref).norm(), 1e-15);
}

TEST(Aggregate, ProtocolErrors) {
  DenseVector x = DenseVector::Zero(2);
  auto code = [&](const std::vector<SparseMessage>& m) {
    try {
      CentralAggregate(m, x, 2, 0);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kConfig;
  };
  EXPECT_EQ(code({Msg(0, 0, {}, {})}), ErrorCode::kProtocol);
  EXPECT_EQ(code({Msg(0, 0, {}, {}), Msg(0, 0, {}, {})}), ErrorCode::kProtocol);
  EXPECT_EQ(code({Msg(0, 0, {}, {}), Msg(1, 1, {}, {})}), ErrorCode::kProtocol);
  EXPECT_EQ(code({Msg(0, 0, {}, {}), Msg(2, 0, {}, {})}), ErrorCode::kProtocol);
  EXPECT_EQ(code({Msg(0, 0, {5}, {1.0}), Msg(1, 0, {}, {})}),
            ErrorCode::kProtocol);
}

TEST(Worker, LosslessMessageCarriesFullUpdate) {
  const auto obj = MakeInterpolatedRegression(8, 4, 1.0, 2);
  ArmijoConfig cfg;
  WorkerState w;
  w.shard = Shard{0, 4};
  w.opt = OptimizerState::Initial(DenseVector::Ones(4), cfg, 3);
  const auto out = WorkerStep(obj, &w, DenseVector::Ones(4), cfg,
                              CompressionSpec(4, 4), 1);
  EXPECT_EQ(w.opt.mem, DenseVector::Zero(4));
  DenseVector dense = DenseVector::Zero(4);
  AddDensified(out.msg, &dense);
  EXPECT_EQ(dense, out.update);
  EXPECT_LT(out.rec.i_t, 4);
}

TEST(Worker, WireConservation) {
  const auto obj = MakeInterpolatedRegression(8, 6, 1.0, 2);
  ArmijoConfig cfg;
  WorkerState w;
  w.shard = Shard{4, 4};
  w.opt = OptimizerState::Initial(DenseVector::Ones(6), cfg, 3);
  DenseVector x = DenseVector::Ones(6);
  for (int round = 0; round < 10; ++round) {
    const DenseVector mem = w.opt.mem;
    const auto out = WorkerStep(obj, &w, x, cfg, CompressionSpec(2, 6), 1);
    EXPECT_GE(out.rec.i_t, 4);
    DenseVector dense = DenseVector::Zero(6);
    AddDensified(out.msg, &dense);
    EXPECT_EQ(dense + w.opt.mem, mem + out.update);
    x -= dense;
  }
}

TEST(Dcsgd, SingleWorkerMatchesSingleNode) {
  const auto obj = MakeInterpolatedRegression(40, 8, 1.0, 6);
  ArmijoConfig cfg;
  DistributedOptions d;
  d.num_workers = 1;
  d.run.T = 150;
  d.run.seed = 4;
  const auto a = RunDcsgd(obj, cfg, CompressionSpec(2, 8), d);
  const auto b = RunCsgdAsss(obj, cfg, CompressionSpec(2, 8), d.run);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t t = 0; t < a.records.size(); ++t) {
    EXPECT_TRUE(SameBits(a.records[t].f_full, b.records[t].f_full));
    EXPECT_TRUE(SameBits(a.records[t].alpha, b.records[t].alpha));
    EXPECT_TRUE(SameBits(a.records[t].mem_sq, b.records[t].mem_sq));
  }
  EXPECT_EQ(a.final_x, b.final_x);
}

TEST(Dcsgd, MemoryIdentityAfterFirstRound) {
  const auto obj = MakeInterpolatedRegression(20, 8, 1.0, 6);
  DistributedOptions d;
  d.num_workers = 2;
  d.run.T = 1;
  const auto tr = RunDcsgd(obj, ArmijoConfig{}, CompressionSpec(2, 8), d);
  EXPECT_LE(tr.max_identity_residual, 1e-15);
}

TEST(Dcsgd, IdentityAndBytes) {
  const auto obj = MakeInterpolatedRegression(200, 32, 1.0, 55);
  DistributedOptions d;
  d.num_workers = 4;
  d.run.T = 200;
  const auto tr = RunDcsgd(obj, ArmijoConfig{}, CompressionSpec(4, 32), d);
  EXPECT_EQ(tr.status, RunStatus::kCompleted);
  EXPECT_LE(tr.max_identity_residual, 1e-9);
  EXPECT_EQ(tr.records[0].bytes_up, 4 * 4 * 12);
  EXPECT_EQ(tr.records[0].bytes_down, 32 * 8);
  for (const auto& r : tr.records)
    EXPECT_LE(r.worker_alpha_min, r.worker_alpha_max);
}

TEST(Dcsgd, ParallelMatchesSerial) {
  const auto obj = MakeInterpolatedRegression(60, 10, 1.0, 8);
  DistributedOptions d;
  d.num_workers = 3;
  d.run.T = 100;
  const auto a = RunDcsgd(obj, ArmijoConfig{}, CompressionSpec(3, 10), d);
  d.parallel = true;
  d.max_threads = 3;
  const auto b = RunDcsgd(obj, ArmijoConfig{}, CompressionSpec(3, 10), d);
  EXPECT_EQ(a.final_x, b.final_x);
}

TEST(Dcsgd, LargerCurvatureShardTakesSmallerSteps) {
  // Shard 0 holds small features, shard 1 large ones.
  const int n = 40, d = 4;
  Rng rng(5);
  DenseMatrix a(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = rng.Normal() * (i < n / 2 ? 0.3 : 3.0);
  const auto obj = FiniteSumObjective::LeastSquares(a, DenseVector::Ones(d));
  ArmijoConfig cfg;
  cfg.alpha_max_init = 10.0;
  DistributedOptions o;
  o.num_workers = 2;
  o.run.T = 200;
  const auto tr = RunDcsgd(obj, cfg, CompressionSpec(2, d), o);
  std::vector<double> w0, w1;
  for (const auto& row : tr.worker_alphas) {
    w0.push_back(row[0]);
    w1.push_back(row[1]);
  }
  auto median = [](std::vector<double> v) {
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
    return v[v.size() / 2];
  };
  EXPECT_GT(median(w0), median(w1));
}

TEST(Dcsgd, ShardDivisibility) {
  const auto obj = MakeInterpolatedRegression(10, 4, 1.0, 1);
  DistributedOptions d;
  d.num_workers = 3;
  EXPECT_THROW(RunDcsgd(obj, ArmijoConfig{}, CompressionSpec(2, 4), d), Error);
}

}  // namespace
}  // namespace csgd
