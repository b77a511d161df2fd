#pragma once

#include <memory>
#include <optional>

#include "tltr/dataset.hpp"
#include "tltr/objective.hpp"

namespace tltr {

/// log(1 + e^t) without overflow for large |t|.
double log1p_exp(double t);
/// 1 / (1 + e^{-t}), evaluated on the branch that cannot overflow.
double sigmoid(double t);

/// Regularized logistic loss
///   f(x) = sum_i log(1 + exp(-y_i <x, z_i>)) + lambda/2 |x|^2,
/// labels in {-1, +1}. lambda defaults to 1/N.
class LogisticLoss final : public Objective {
 public:
  explicit LogisticLoss(std::shared_ptr<const Dataset> data,
                        std::optional<double> lambda = std::nullopt);

  double lambda() const { return lambda_; }

 protected:
  double eval_value(const Vector& x) const override;
  Vector eval_gradient(const Vector& x) const override;
  Vector eval_hess_vec(const Vector& x, const Vector& v) const override;
  double eval_reduction(const Vector& x, const Vector& p) const override;

 private:
  std::shared_ptr<const Dataset> data_;
  double lambda_;
};

/// Nonconvex sigmoid least-squares loss
///   f(x) = 1/N sum_i (y_i - sigma(<x, z_i>))^2 + lambda/2 |x|^2,
/// labels in {0, 1}. lambda defaults to 1/N; lambda = 0 gives the
/// unregularized variant. The Hessian may be indefinite.
class LeastSquaresLoss final : public Objective {
 public:
  explicit LeastSquaresLoss(std::shared_ptr<const Dataset> data,
                            std::optional<double> lambda = std::nullopt);

  double lambda() const { return lambda_; }

 protected:
  double eval_value(const Vector& x) const override;
  Vector eval_gradient(const Vector& x) const override;
  Vector eval_hess_vec(const Vector& x, const Vector& v) const override;
  double eval_reduction(const Vector& x, const Vector& p) const override;

 private:
  std::shared_ptr<const Dataset> data_;
  double lambda_;
};

/// f(x) = 1/2 x'Ax + b'x + c with a dense symmetric A. Used for smoke
/// problems where the quadratic model is exact.
class QuadraticObjective final : public Objective {
 public:
  QuadraticObjective(Matrix a, Vector b, double c = 0.0);

  const Matrix& hessian() const { return a_; }
  const Vector& linear() const { return b_; }

 protected:
  double eval_value(const Vector& x) const override;
  Vector eval_gradient(const Vector& x) const override;
  Vector eval_hess_vec(const Vector& x, const Vector& v) const override;
  double eval_reduction(const Vector& x, const Vector& p) const override;

 private:
  Matrix a_;
  Vector b_;
  double c_;
};

/// Ridge regression on a dataset,
///   f(x) = 1/(2N) |Zx - y|^2 + lambda/2 |x|^2,
/// a convex quadratic backed by the sparse sample matrix.
class RidgeLoss final : public Objective {
 public:
  explicit RidgeLoss(std::shared_ptr<const Dataset> data,
                     std::optional<double> lambda = std::nullopt);

  double lambda() const { return lambda_; }

 protected:
  double eval_value(const Vector& x) const override;
  Vector eval_gradient(const Vector& x) const override;
  Vector eval_hess_vec(const Vector& x, const Vector& v) const override;
  double eval_reduction(const Vector& x, const Vector& p) const override;

 private:
  std::shared_ptr<const Dataset> data_;
  double lambda_;
};

}  // namespace tltr
