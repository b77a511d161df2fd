#pragma once

// Helpers shared by the unit and acceptance tests. The oracles here are
// written against plain loops and dense matrices, not the library code paths.

#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "tltr/dataset.hpp"
#include "tltr/objective.hpp"

namespace tltr::testkit {

inline std::shared_ptr<const Dataset> random_dataset(Eigen::Index n_samples, Eigen::Index n_features,
                                                     double density, bool zero_one_labels,
                                                     std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit;
  std::vector<Eigen::Triplet<double>> entries;
  Vector labels(n_samples);
  for (Eigen::Index i = 0; i < n_samples; ++i) {
    for (Eigen::Index j = 0; j < n_features; ++j) {
      if (unit(rng) < density) entries.emplace_back(i, j, normal(rng));
    }
    const bool positive = unit(rng) < 0.5;
    labels[i] = positive ? 1.0 : (zero_one_labels ? 0.0 : -1.0);
  }
  SparseRowMatrix z(n_samples, n_features);
  z.setFromTriplets(entries.begin(), entries.end());
  return std::make_shared<const Dataset>(std::move(z), std::move(labels));
}

inline Vector random_vector(Eigen::Index n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal;
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = scale * normal(rng);
  return v;
}

inline Matrix dense(const Dataset& d) { return Matrix(d.features()); }

// sum_i log(1 + exp(-y_i z_i.x)) + lambda/2 |x|^2, one term at a time.
inline double naive_logistic(const Dataset& d, const Vector& x, double lambda) {
  const Matrix z = dense(d);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    double m = 0.0;
    for (Eigen::Index j = 0; j < z.cols(); ++j) m += z(i, j) * x[j];
    sum += std::log1p(std::exp(-d.labels()[i] * m));
  }
  double reg = 0.0;
  for (Eigen::Index j = 0; j < x.size(); ++j) reg += x[j] * x[j];
  return sum + 0.5 * lambda * reg;
}

inline double naive_least_squares(const Dataset& d, const Vector& x, double lambda) {
  const Matrix z = dense(d);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    double u = 0.0;
    for (Eigen::Index j = 0; j < z.cols(); ++j) u += z(i, j) * x[j];
    const double r = d.labels()[i] - 1.0 / (1.0 + std::exp(-u));
    sum += r * r;
  }
  double reg = 0.0;
  for (Eigen::Index j = 0; j < x.size(); ++j) reg += x[j] * x[j];
  return sum / static_cast<double>(z.rows()) + 0.5 * lambda * reg;
}

// Central differences with step 1e-6 (1 + |x_j|).
inline Vector fd_gradient(const Objective& f, const Vector& x) {
  Vector g(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double h = 1e-6 * (1.0 + std::abs(x[j]));
    Vector xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    g[j] = (f.value(xp) - f.value(xm)) / (2.0 * h);
  }
  return g;
}

inline Vector fd_hess_vec(const Objective& f, const Vector& x, const Vector& v) {
  const double h = 1e-6 * (1.0 + x.norm()) / std::max(1.0, v.norm());
  return (f.gradient(x + h * v) - f.gradient(x - h * v)) / (2.0 * h);
}

// max_j |a_j - b_j| / max(|b_j|, floor)
inline double max_rel_error(const Vector& a, const Vector& b, double floor = 1e-8) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < a.size(); ++j) {
    worst = std::max(worst, std::abs(a[j] - b[j]) / std::max(std::abs(b[j]), floor));
  }
  return worst;
}

class Rosenbrock final : public Objective {
 public:
  Rosenbrock() : Objective(2) {}

 protected:
  double eval_value(const Vector& x) const override {
    const double a = 1.0 - x[0];
    const double b = x[1] - x[0] * x[0];
    return a * a + 100.0 * b * b;
  }
  Vector eval_gradient(const Vector& x) const override {
    const double b = x[1] - x[0] * x[0];
    Vector g(2);
    g << -2.0 * (1.0 - x[0]) - 400.0 * x[0] * b, 200.0 * b;
    return g;
  }
  Vector eval_hess_vec(const Vector& x, const Vector& v) const override {
    Eigen::Matrix2d h;
    h << 2.0 - 400.0 * (x[1] - 3.0 * x[0] * x[0]), -400.0 * x[0], -400.0 * x[0], 200.0;
    return h * v;
  }
};

}  // namespace tltr::testkit
