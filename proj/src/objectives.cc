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

#include "csgd/objectives.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "csgd/rng.h"

namespace csgd {

const char* ObjectiveKindName(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::kDiagQuadratic: return "diag_quadratic";
    case ObjectiveKind::kInterpolatedRegression:
      return "interpolated_regression";
    case ObjectiveKind::kStronglyConvexMix: return "strongly_convex_mix";
  }
  return "unknown";
}

ObjectiveKind ParseObjectiveKind(const std::string& name) {
  if (name == "diag_quadratic") return ObjectiveKind::kDiagQuadratic;
  if (name == "interpolated_regression")
    return ObjectiveKind::kInterpolatedRegression;
  if (name == "strongly_convex_mix") return ObjectiveKind::kStronglyConvexMix;
  throw Error(ErrorCode::kInvalidSpec, "unknown objective kind '" + name + "'");
}

FiniteSumObjective FiniteSumObjective::DiagQuadratic(
    const std::vector<double>& curvatures) {
  if (curvatures.empty())
    throw Error(ErrorCode::kInvalidSpec, "diag_quadratic: no curvatures");
  FiniteSumObjective obj;
  obj.kind_ = ObjectiveKind::kDiagQuadratic;
  obj.diag_ = true;
  obj.n_ = 1;
  obj.dim_ = static_cast<int>(curvatures.size());
  obj.c_.resize(obj.dim_);
  for (int j = 0; j < obj.dim_; ++j) {
    if (!(curvatures[j] > 0.0) || !std::isfinite(curvatures[j]))
      throw Error(ErrorCode::kInvalidSpec,
                  "diag_quadratic: curvature " + std::to_string(j) +
                      " must be positive and finite");
    obj.c_[j] = curvatures[j];
  }
  obj.lipschitz_ = {2.0 * obj.c_.maxCoeff()};
  obj.mu_ = {2.0 * obj.c_.minCoeff()};
  obj.x_star_ = DenseVector::Zero(obj.dim_);
  obj.Finalize();
  return obj;
}

FiniteSumObjective FiniteSumObjective::LeastSquares(DenseMatrix a,
                                                    DenseVector x_star,
                                                    std::vector<double> ridge) {
  if (a.rows() < 1 || a.cols() < 1)
    throw Error(ErrorCode::kInvalidSpec, "least squares: empty design");
  CheckDim(x_star.size(), a.cols(), "least squares x*");
  if (ridge.empty()) ridge.assign(a.rows(), 0.0);
  if (static_cast<Eigen::Index>(ridge.size()) != a.rows())
    throw Error(ErrorCode::kDimensionMismatch, "least squares: ridge size");
  for (double m : ridge)
    if (!(m >= 0.0) || !std::isfinite(m))
      throw Error(ErrorCode::kInvalidSpec, "least squares: negative ridge");

  FiniteSumObjective obj;
  obj.kind_ = ObjectiveKind::kInterpolatedRegression;
  obj.n_ = static_cast<int>(a.rows());
  obj.dim_ = static_cast<int>(a.cols());
  obj.a_ = std::move(a);
  obj.ridge_ = std::move(ridge);
  obj.b_ = obj.a_ * x_star;
  obj.x_star_ = std::move(x_star);
  obj.lipschitz_.resize(obj.n_);
  obj.mu_.resize(obj.n_);
  for (int i = 0; i < obj.n_; ++i) {
    obj.lipschitz_[i] = 2.0 * obj.a_.row(i).squaredNorm() + obj.ridge_[i];
    obj.mu_[i] = obj.ridge_[i];
  }
  obj.ridge_mean_ =
      std::accumulate(obj.ridge_.begin(), obj.ridge_.end(), 0.0) / obj.n_;
  // Averaged Hessian pays off once d <= n.
  if (obj.dim_ <= obj.n_) {
    obj.hessian_ = obj.a_.transpose() * obj.a_;
    obj.hessian_ /= static_cast<double>(obj.n_);
    obj.hessian_.diagonal().array() += 0.5 * obj.ridge_mean_;
  }
  obj.Finalize();
  return obj;
}

void FiniteSumObjective::Finalize() {
  l_max_ = *std::max_element(lipschitz_.begin(), lipschitz_.end());
  mu_bar_ = std::accumulate(mu_.begin(), mu_.end(), 0.0) / n_;
}

double FiniteSumObjective::L_mean() const {
  return std::accumulate(lipschitz_.begin(), lipschitz_.end(), 0.0) / n_;
}

void FiniteSumObjective::CheckIndex(int i) const {
  if (i < 0 || i >= n_)
    throw Error(ErrorCode::kIndexOutOfRange,
                "component " + std::to_string(i) + " not in [0, " +
                    std::to_string(n_) + ")");
}

double FiniteSumObjective::ComponentValue(int i, const DenseVector& x) const {
  CheckIndex(i);
  CheckDim(x.size(), dim_, "component value");
  if (diag_) return (c_.array() * x.array().square()).sum();
  const DenseVector e = x - *x_star_;
  const double r = a_.row(i).dot(e);
  double v = r * r;
  if (ridge_[i] != 0.0) v += 0.5 * ridge_[i] * e.squaredNorm();
  return v;
}

double FiniteSumObjective::ComponentValueGrad(int i, const DenseVector& x,
                                              DenseVector* grad) const {
  CheckIndex(i);
  CheckDim(x.size(), dim_, "component gradient");
  if (diag_) {
    *grad = 2.0 * (c_.array() * x.array()).matrix();
    return (c_.array() * x.array().square()).sum();
  }
  const DenseVector e = x - *x_star_;
  const double r = a_.row(i).dot(e);
  *grad = (2.0 * r) * a_.row(i).transpose();
  double v = r * r;
  if (ridge_[i] != 0.0) {
    *grad += ridge_[i] * e;
    v += 0.5 * ridge_[i] * e.squaredNorm();
  }
  return v;
}

DenseVector FiniteSumObjective::ComponentGrad(int i,
                                              const DenseVector& x) const {
  DenseVector g;
  ComponentValueGrad(i, x, &g);
  return g;
}

double FiniteSumObjective::FullValue(const DenseVector& x) const {
  CheckDim(x.size(), dim_, "full value");
  if (diag_) return (c_.array() * x.array().square()).sum();
  const DenseVector e = x - *x_star_;
  if (hessian_.size() > 0) return e.dot(hessian_ * e);
  const DenseVector r = a_ * e;
  return (r.squaredNorm() + 0.5 * ridge_mean_ * n_ * e.squaredNorm()) / n_;
}

DenseVector FiniteSumObjective::FullGrad(const DenseVector& x) const {
  CheckDim(x.size(), dim_, "full gradient");
  if (diag_) return 2.0 * (c_.array() * x.array()).matrix();
  const DenseVector e = x - *x_star_;
  if (hessian_.size() > 0) return 2.0 * (hessian_ * e);
  const DenseVector r = a_ * e;
  DenseVector g = (2.0 / n_) * (a_.transpose() * r);
  g += ridge_mean_ * e;
  return g;
}

double FiniteSumObjective::BatchValue(const std::vector<int>& idx,
                                      const DenseVector& x) const {
  if (idx.size() == 1) return ComponentValue(idx[0], x);
  double v = 0.0;
  for (int i : idx) v += ComponentValue(i, x);
  return v / static_cast<double>(idx.size());
}

double FiniteSumObjective::BatchValueGrad(const std::vector<int>& idx,
                                          const DenseVector& x,
                                          DenseVector* grad) const {
  if (idx.empty()) throw Error(ErrorCode::kInvalidSpec, "empty batch");
  if (idx.size() == 1) return ComponentValueGrad(idx[0], x, grad);
  grad->setZero(dim_);
  DenseVector gi;
  double v = 0.0;
  for (int i : idx) {
    v += ComponentValueGrad(i, x, &gi);
    *grad += gi;
  }
  const double inv = 1.0 / static_cast<double>(idx.size());
  *grad *= inv;
  return v * inv;
}

FiniteSumObjective MakeDiagQuadratic(const std::vector<double>& curvatures) {
  return FiniteSumObjective::DiagQuadratic(curvatures);
}

namespace {

void CheckSizes(int n, int d) {
  if (n < 1 || d < 1)
    throw Error(ErrorCode::kInvalidSpec, "objective needs n >= 1 and d >= 1");
}

}  // namespace

FiniteSumObjective MakeInterpolatedRegression(int n, int d, double feature_std,
                                              std::uint64_t seed) {
  CheckSizes(n, d);
  if (!(feature_std > 0.0))
    throw Error(ErrorCode::kInvalidSpec, "feature_std must be positive");
  Rng rng(seed);
  DenseVector x_star(d);
  for (int j = 0; j < d; ++j) x_star[j] = rng.Normal();
  DenseMatrix a(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = feature_std * rng.Normal();
  auto obj = FiniteSumObjective::LeastSquares(std::move(a), std::move(x_star));
  obj.set_kind(ObjectiveKind::kInterpolatedRegression);
  return obj;
}

FiniteSumObjective MakeStronglyConvexMix(int n, int d, double mu_floor,
                                         std::uint64_t seed) {
  CheckSizes(n, d);
  if (!(mu_floor >= 0.0))
    throw Error(ErrorCode::kInvalidSpec, "mu_floor must be nonnegative");
  Rng rng(seed);
  DenseVector x_star(d);
  for (int j = 0; j < d; ++j) x_star[j] = rng.Normal();
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  DenseMatrix a(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = scale * rng.Normal();
  std::vector<double> ridge(n, 0.0);
  for (int i = 0; i < n; i += 2) ridge[i] = mu_floor + rng.UniformPositive();
  auto obj = FiniteSumObjective::LeastSquares(std::move(a), std::move(x_star),
                                              std::move(ridge));
  obj.set_kind(ObjectiveKind::kStronglyConvexMix);
  return obj;
}

double EstimateSgcConstant(const FiniteSumObjective& obj, int sample_count,
                           std::uint64_t seed) {
  if (sample_count < 1)
    throw Error(ErrorCode::kInvalidSpec, "sample_count must be >= 1");
  Rng rng(seed);
  const int d = obj.dim();
  double best = -1.0;
  DenseVector x(d), gi;
  for (int s = 0; s < sample_count; ++s) {
    for (int j = 0; j < d; ++j) x[j] = rng.Normal();
    if (obj.x_star()) x += *obj.x_star();
    const DenseVector g = obj.FullGrad(x);
    const double denom = g.squaredNorm();
    if (denom < 1e-24) continue;
    double num = 0.0;
    for (int i = 0; i < obj.n(); ++i) {
      obj.ComponentValueGrad(i, x, &gi);
      num += gi.squaredNorm();
    }
    best = std::max(best, num / obj.n() / denom);
  }
  if (best < 0.0)
    throw Error(ErrorCode::kEstimationFailed,
                "every sampled full gradient vanished");
  return best;
}

}  // namespace csgd
