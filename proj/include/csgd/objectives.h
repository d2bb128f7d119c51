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

#ifndef CSGD_OBJECTIVES_H_
#define CSGD_OBJECTIVES_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "csgd/types.h"

namespace csgd {

enum class ObjectiveKind { kDiagQuadratic, kInterpolatedRegression,
                           kStronglyConvexMix };

const char* ObjectiveKindName(ObjectiveKind kind);
ObjectiveKind ParseObjectiveKind(const std::string& name);

// Finite sum f(x) = (1/n) sum_i f_i(x). Two component families are
// supported:
//
//   diagonal quadratic   f_1(x) = sum_j c_j x_j^2            (n = 1)
//   least squares + ridge f_i(x) = (<a_i,x> - b_i)^2 + (m_i/2)|x - x*|^2
//
// with b_i = <a_i, x*>, so every component gradient vanishes at x* and the
// interpolation condition holds by construction. Both are quadratic in
// e = x - x*, and the full objective is evaluated through the averaged
// Hessian Q (f = e'Qe) when that is cheaper than a pass over components.
//
// Immutable after construction; all evaluation methods are const and
// thread-safe.
class FiniteSumObjective {
 public:
  static FiniteSumObjective DiagQuadratic(const std::vector<double>& curvatures);
  // Rows of `a` are the feature vectors a_i. `ridge` holds m_i (empty means
  // all zero).
  static FiniteSumObjective LeastSquares(DenseMatrix a, DenseVector x_star,
                                         std::vector<double> ridge = {});

  int n() const { return n_; }
  int dim() const { return dim_; }
  ObjectiveKind kind() const { return kind_; }
  void set_kind(ObjectiveKind kind) { kind_ = kind; }

  double ComponentValue(int i, const DenseVector& x) const;
  DenseVector ComponentGrad(int i, const DenseVector& x) const;
  // Value and gradient in one pass; `grad` is overwritten.
  double ComponentValueGrad(int i, const DenseVector& x,
                            DenseVector* grad) const;

  double FullValue(const DenseVector& x) const;
  DenseVector FullGrad(const DenseVector& x) const;

  // Mean of f_i over the multiset `idx`, and its gradient.
  double BatchValue(const std::vector<int>& idx, const DenseVector& x) const;
  double BatchValueGrad(const std::vector<int>& idx, const DenseVector& x,
                        DenseVector* grad) const;

  const std::vector<double>& lipschitz() const { return lipschitz_; }
  const std::vector<double>& mu() const { return mu_; }
  double L_max() const { return l_max_; }
  double L_mean() const;
  double mu_bar() const { return mu_bar_; }
  const std::optional<DenseVector>& x_star() const { return x_star_; }
  std::optional<double> f_star() const {
    if (x_star_) return 0.0;
    return std::nullopt;
  }

  // Raw data, exposed for oracles in tests.
  const DenseMatrix& features() const { return a_; }
  const std::vector<double>& ridge() const { return ridge_; }
  const DenseVector& curvatures() const { return c_; }

 private:
  FiniteSumObjective() = default;
  void CheckIndex(int i) const;
  void Finalize();

  ObjectiveKind kind_ = ObjectiveKind::kDiagQuadratic;
  bool diag_ = false;
  int n_ = 0;
  int dim_ = 0;
  DenseVector c_;                // diag curvatures
  DenseMatrix a_;                // n x d features
  DenseVector b_;
  std::vector<double> ridge_;    // m_i
  Eigen::MatrixXd hessian_;      // averaged Q, empty when not used
  double ridge_mean_ = 0.0;
  std::vector<double> lipschitz_;
  std::vector<double> mu_;
  double l_max_ = 0.0;
  double mu_bar_ = 0.0;
  std::optional<DenseVector> x_star_;
};

FiniteSumObjective MakeDiagQuadratic(const std::vector<double>& curvatures);
// Features i.i.d. N(0, feature_std^2), x* i.i.d. N(0, 1).
FiniteSumObjective MakeInterpolatedRegression(int n, int d, double feature_std,
                                              std::uint64_t seed);
// Features i.i.d. N(0, 1/d), x* i.i.d. N(0, 1). Even-indexed components
// carry ridge m_i = mu_floor + u, u ~ U(0,1]; odd ones carry none.
FiniteSumObjective MakeStronglyConvexMix(int n, int d, double mu_floor,
                                         std::uint64_t seed);

// Lower estimate of the strong growth constant: the largest observed
// (1/n) sum_i |grad f_i(x)|^2 / |grad f(x)|^2 over sample_count points
// x = x* + N(0, I) (or N(0, I) when x* is unknown).
double EstimateSgcConstant(const FiniteSumObjective& obj, int sample_count,
                           std::uint64_t seed);

}  // namespace csgd

#endif  // CSGD_OBJECTIVES_H_
