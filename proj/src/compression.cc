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

#include "csgd/compression.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace csgd {

CompressionSpec::CompressionSpec(int k_, int d_) : k(k_), d(d_) { Validate(); }

void CompressionSpec::Validate() const {
  if (d < 1 || k < 1 || k > d)
    throw Error(ErrorCode::kInvalidSpec,
                "compression needs 1 <= k <= d, got k=" + std::to_string(k) +
                    " d=" + std::to_string(d));
}

std::vector<int> TopKIndices(const DenseVector& v,
                             const CompressionSpec& spec) {
  spec.Validate();
  CheckDim(v.size(), spec.d, "top_k");
  std::vector<int> idx(spec.d);
  std::iota(idx.begin(), idx.end(), 0);
  if (spec.k == spec.d) return idx;
  auto before = [&v](int i, int j) {
    const double ai = std::abs(v[i]), aj = std::abs(v[j]);
    return ai > aj || (ai == aj && i < j);
  };
  std::nth_element(idx.begin(), idx.begin() + (spec.k - 1), idx.end(), before);
  idx.resize(spec.k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

DenseVector TopK(const DenseVector& v, const CompressionSpec& spec) {
  DenseVector out = DenseVector::Zero(v.size());
  for (int j : TopKIndices(v, spec)) out[j] = v[j];
  return out;
}

FeedbackResult CompressWithFeedback(const DenseVector& mem,
                                    const DenseVector& update,
                                    const CompressionSpec& spec) {
  CheckDim(mem.size(), spec.d, "feedback memory");
  CheckDim(update.size(), spec.d, "feedback update");
  FeedbackResult out;
  out.mem = mem + update;
  out.support = TopKIndices(out.mem, spec);
  out.g = DenseVector::Zero(spec.d);
  for (int j : out.support) {
    out.g[j] = out.mem[j];
    out.mem[j] = 0.0;
  }
  return out;
}

bool ContractionCheck(const DenseVector& v, const CompressionSpec& spec) {
  const DenseVector residual = v - TopK(v, spec);
  return residual.squaredNorm() <=
         (1.0 - spec.gamma()) * v.squaredNorm() + 1e-12;
}

}  // namespace csgd
