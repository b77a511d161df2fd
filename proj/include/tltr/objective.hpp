#pragma once

#include <atomic>
#include <cstdint>

#include <Eigen/Core>

namespace tltr {

using Vector = Eigen::VectorXd;

struct EvalCounts {
  std::uint64_t value = 0;
  std::uint64_t gradient = 0;
  std::uint64_t hess_vec = 0;

  friend bool operator==(const EvalCounts&, const EvalCounts&) = default;
  friend EvalCounts operator-(const EvalCounts& a, const EvalCounts& b) {
    return {a.value - b.value, a.gradient - b.gradient, a.hess_vec - b.hess_vec};
  }
};

/// Twice differentiable f: R^n -> R, accessed through values, gradients and
/// Hessian-vector products. Every public call is counted; the counters are
/// atomic so one instance can be evaluated from several threads.
class Objective {
 public:
  explicit Objective(Eigen::Index dimension) : dimension_(dimension) {}
  virtual ~Objective() = default;

  Objective(const Objective&) = delete;
  Objective& operator=(const Objective&) = delete;

  Eigen::Index dimension() const { return dimension_; }

  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;
  Vector hess_vec(const Vector& x, const Vector& v) const;
  /// f(x) - f(x + p), computed from the step so that the result is accurate
  /// relative to the reduction itself rather than to |f|. Counted as one
  /// value evaluation.
  double reduction(const Vector& x, const Vector& p) const;

  EvalCounts counts() const;
  void reset_counts();

 protected:
  virtual double eval_value(const Vector& x) const = 0;
  virtual Vector eval_gradient(const Vector& x) const = 0;
  virtual Vector eval_hess_vec(const Vector& x, const Vector& v) const = 0;
  virtual double eval_reduction(const Vector& x, const Vector& p) const {
    return eval_value(x) - eval_value(x + p);
  }

 private:
  void check(const Vector& x, const char* what) const;

  Eigen::Index dimension_;
  mutable std::atomic<std::uint64_t> n_value_{0};
  mutable std::atomic<std::uint64_t> n_gradient_{0};
  mutable std::atomic<std::uint64_t> n_hess_vec_{0};
};

}  // namespace tltr
