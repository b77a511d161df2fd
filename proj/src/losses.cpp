#include "tltr/losses.hpp"

#include <cmath>
#include <stdexcept>

namespace tltr {

double log1p_exp(double t) {
  if (t > 0.0) return t + std::log1p(std::exp(-t));
  return std::log1p(std::exp(t));
}

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

namespace {

const Dataset& require(const std::shared_ptr<const Dataset>& data) {
  if (!data) throw std::invalid_argument("loss: null dataset");
  return *data;
}

double resolve_lambda(const Dataset& d, std::optional<double> lambda) {
  if (lambda) {
    if (!(*lambda >= 0.0) || !std::isfinite(*lambda)) {
      throw std::invalid_argument("loss: lambda must be finite and >= 0");
    }
    return *lambda;
  }
  if (d.n_samples() == 0) {
    throw std::invalid_argument("loss: default lambda = 1/N needs a non-empty dataset");
  }
  return 1.0 / static_cast<double>(d.n_samples());
}

void require_labels(const Dataset& d, double lo, double hi, const char* loss) {
  for (Eigen::Index i = 0; i < d.labels().size(); ++i) {
    const double y = d.labels()[i];
    if (y != lo && y != hi) {
      throw std::invalid_argument(std::string(loss) + ": label " + std::to_string(y) +
                                  " at sample " + std::to_string(i) + " is not in {" +
                                  std::to_string(lo) + ", " + std::to_string(hi) + "}");
    }
  }
}

// lambda/2 (|x|^2 - |x + p|^2)
double ridge_reduction(double lambda, const Vector& x, const Vector& p) {
  return -lambda * (x.dot(p) + 0.5 * p.squaredNorm());
}

// log1p_exp(b + d) - log1p_exp(b) = log1p(sigma(b) expm1(d)).
double log1p_exp_difference(double b, double d) {
  if (std::abs(d) > 1.0) return log1p_exp(b + d) - log1p_exp(b);
  return std::log1p(sigmoid(b) * std::expm1(d));
}

// sigmoid(b) - sigmoid(b + d) = -sigmoid(b) sigmoid(-b - d) expm1(d).
double sigmoid_difference(double b, double d) {
  if (std::abs(d) > 700.0) return sigmoid(b) - sigmoid(b + d);
  return -sigmoid(b) * sigmoid(-b - d) * std::expm1(d);
}

double inverse_count(const Dataset& d) {
  return d.n_samples() > 0 ? 1.0 / static_cast<double>(d.n_samples()) : 0.0;
}

}  // namespace

// ---------------------------------------------------------------- logistic

LogisticLoss::LogisticLoss(std::shared_ptr<const Dataset> data, std::optional<double> lambda)
    : Objective(require(data).n_features()), data_(std::move(data)),
      lambda_(resolve_lambda(*data_, lambda)) {
  require_labels(*data_, -1.0, 1.0, "logistic loss");
}

double LogisticLoss::eval_value(const Vector& x) const {
  const Vector margins = data_->labels().cwiseProduct(data_->features() * x);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < margins.size(); ++i) sum += log1p_exp(-margins[i]);
  return sum + 0.5 * lambda_ * x.squaredNorm();
}

Vector LogisticLoss::eval_gradient(const Vector& x) const {
  const Vector& y = data_->labels();
  const Vector margins = y.cwiseProduct(data_->features() * x);
  Vector w(margins.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = -y[i] * sigmoid(-margins[i]);
  return data_->features().transpose() * w + lambda_ * x;
}

Vector LogisticLoss::eval_hess_vec(const Vector& x, const Vector& v) const {
  // Curvature weights sigma(m)(1 - sigma(m)) do not depend on the label sign.
  const Vector u = data_->features() * x;
  Vector zv = data_->features() * v;
  for (Eigen::Index i = 0; i < zv.size(); ++i) {
    const double s = sigmoid(u[i]);
    zv[i] *= s * (1.0 - s);
  }
  return data_->features().transpose() * zv + lambda_ * v;
}

double LogisticLoss::eval_reduction(const Vector& x, const Vector& p) const {
  const Vector& y = data_->labels();
  const Vector m = y.cwiseProduct(data_->features() * x);
  const Vector e = y.cwiseProduct(data_->features() * p);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < m.size(); ++i) sum += log1p_exp_difference(-m[i] - e[i], e[i]);
  return sum + ridge_reduction(lambda_, x, p);
}

// ----------------------------------------------------------- least squares

LeastSquaresLoss::LeastSquaresLoss(std::shared_ptr<const Dataset> data,
                                   std::optional<double> lambda)
    : Objective(require(data).n_features()), data_(std::move(data)),
      lambda_(resolve_lambda(*data_, lambda)) {
  require_labels(*data_, 0.0, 1.0, "least-squares loss");
}

double LeastSquaresLoss::eval_value(const Vector& x) const {
  const Vector u = data_->features() * x;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double r = data_->labels()[i] - sigmoid(u[i]);
    sum += r * r;
  }
  return inverse_count(*data_) * sum + 0.5 * lambda_ * x.squaredNorm();
}

Vector LeastSquaresLoss::eval_gradient(const Vector& x) const {
  const Vector u = data_->features() * x;
  Vector w(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double s = sigmoid(u[i]);
    w[i] = (s - data_->labels()[i]) * s * (1.0 - s);
  }
  return 2.0 * inverse_count(*data_) * (data_->features().transpose() * w) + lambda_ * x;
}

Vector LeastSquaresLoss::eval_hess_vec(const Vector& x, const Vector& v) const {
  const Vector u = data_->features() * x;
  Vector zv = data_->features() * v;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double s = sigmoid(u[i]);
    const double ds = s * (1.0 - s);
    const double d2s = ds * (1.0 - 2.0 * s);
    zv[i] *= ds * ds + (s - data_->labels()[i]) * d2s;
  }
  return 2.0 * inverse_count(*data_) * (data_->features().transpose() * zv) + lambda_ * v;
}

double LeastSquaresLoss::eval_reduction(const Vector& x, const Vector& p) const {
  const Vector u = data_->features() * x;
  const Vector e = data_->features() * p;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    // (y - s0)^2 - (y - s1)^2 = (s1 - s0)(2y - s0 - s1)
    const double s0 = sigmoid(u[i]);
    const double s1 = sigmoid(u[i] + e[i]);
    sum += sigmoid_difference(u[i] + e[i], -e[i]) * (2.0 * data_->labels()[i] - s0 - s1);
  }
  return inverse_count(*data_) * sum + ridge_reduction(lambda_, x, p);
}

// --------------------------------------------------------------- quadratic

QuadraticObjective::QuadraticObjective(Matrix a, Vector b, double c)
    : Objective(b.size()), a_(std::move(a)), b_(std::move(b)), c_(c) {
  if (a_.rows() != b_.size() || a_.cols() != b_.size()) {
    throw std::invalid_argument("quadratic: A must be n x n with n = b.size()");
  }
  a_ = 0.5 * (a_ + a_.transpose()).eval();
}

double QuadraticObjective::eval_value(const Vector& x) const {
  return 0.5 * x.dot(a_ * x) + b_.dot(x) + c_;
}

Vector QuadraticObjective::eval_gradient(const Vector& x) const { return a_ * x + b_; }

Vector QuadraticObjective::eval_hess_vec(const Vector&, const Vector& v) const { return a_ * v; }

double QuadraticObjective::eval_reduction(const Vector& x, const Vector& p) const {
  return -((a_ * x + b_).dot(p) + 0.5 * p.dot(a_ * p));
}

// ------------------------------------------------------------------- ridge

RidgeLoss::RidgeLoss(std::shared_ptr<const Dataset> data, std::optional<double> lambda)
    : Objective(require(data).n_features()), data_(std::move(data)),
      lambda_(resolve_lambda(*data_, lambda)) {}

double RidgeLoss::eval_value(const Vector& x) const {
  const Vector r = data_->features() * x - data_->labels();
  return 0.5 * inverse_count(*data_) * r.squaredNorm() + 0.5 * lambda_ * x.squaredNorm();
}

Vector RidgeLoss::eval_gradient(const Vector& x) const {
  const Vector r = data_->features() * x - data_->labels();
  return inverse_count(*data_) * (data_->features().transpose() * r) + lambda_ * x;
}

Vector RidgeLoss::eval_hess_vec(const Vector&, const Vector& v) const {
  const Vector zv = data_->features() * v;
  return inverse_count(*data_) * (data_->features().transpose() * zv) + lambda_ * v;
}

double RidgeLoss::eval_reduction(const Vector& x, const Vector& p) const {
  const Vector r = data_->features() * x - data_->labels();
  const Vector q = data_->features() * p;
  return -0.5 * inverse_count(*data_) * (2.0 * r.dot(q) + q.squaredNorm()) +
         ridge_reduction(lambda_, x, p);
}

}  // namespace tltr
