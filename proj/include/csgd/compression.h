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

#ifndef CSGD_COMPRESSION_H_
#define CSGD_COMPRESSION_H_

#include <vector>

#include "csgd/types.h"

namespace csgd {

struct CompressionSpec {
  int k = 1;
  int d = 1;

  CompressionSpec() = default;
  CompressionSpec(int k_, int d_);
  double gamma() const { return static_cast<double>(k) / d; }
  void Validate() const;
};

// Indices of the k largest |v_j|, ties toward the lowest index, returned in
// increasing order.
std::vector<int> TopKIndices(const DenseVector& v, const CompressionSpec& spec);
DenseVector TopK(const DenseVector& v, const CompressionSpec& spec);

struct FeedbackResult {
  DenseVector g;
  DenseVector mem;
  std::vector<int> support;  // increasing
};

// s = mem + update; g keeps s on the top-k support, mem' is s with that
// support zeroed. Kept entries are copied, so g + mem' == s bitwise.
FeedbackResult CompressWithFeedback(const DenseVector& mem,
                                    const DenseVector& update,
                                    const CompressionSpec& spec);

// |v - top_k(v)|^2 <= (1 - gamma)|v|^2 + 1e-12
bool ContractionCheck(const DenseVector& v, const CompressionSpec& spec);

}  // namespace csgd

#endif  // CSGD_COMPRESSION_H_
