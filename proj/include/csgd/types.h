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

#ifndef CSGD_TYPES_H_
#define CSGD_TYPES_H_

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace csgd {

// Iterates, gradients and error memories all live in this type.
using DenseVector = Eigen::VectorXd;
using DenseMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                  Eigen::RowMajor>;

enum class ErrorCode {
  kInvalidSpec,
  kDimensionMismatch,
  kIndexOutOfRange,
  kEstimationFailed,
  kSearchFailed,
  kDegenerateInput,
  kInfeasible,
  kConstructionFailed,
  kProtocol,
  kConfig,
  kDomain,
};

const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Raised when the Armijo search runs out of backtracks.
class SearchFailedError : public Error {
 public:
  SearchFailedError(const std::string& what, double last_candidate)
      : Error(ErrorCode::kSearchFailed, what),
        last_candidate_(last_candidate) {}
  double last_candidate() const { return last_candidate_; }

 private:
  double last_candidate_;
};

inline void CheckDim(Eigen::Index got, Eigen::Index want, const char* what) {
  if (got != want) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(what) + ": dimension " + std::to_string(got) +
                    " != " + std::to_string(want));
  }
}

}  // namespace csgd

#endif  // CSGD_TYPES_H_
