#include "tltr/objective.hpp"

#include <stdexcept>
#include <string>

namespace tltr {

void Objective::check(const Vector& x, const char* what) const {
  if (x.size() != dimension_) {
    throw std::invalid_argument(std::string(what) + ": expected dimension " +
                                std::to_string(dimension_) + ", got " + std::to_string(x.size()));
  }
}

double Objective::value(const Vector& x) const {
  check(x, "value");
  n_value_.fetch_add(1, std::memory_order_relaxed);
  return eval_value(x);
}

Vector Objective::gradient(const Vector& x) const {
  check(x, "gradient");
  n_gradient_.fetch_add(1, std::memory_order_relaxed);
  return eval_gradient(x);
}

Vector Objective::hess_vec(const Vector& x, const Vector& v) const {
  check(x, "hess_vec");
  check(v, "hess_vec");
  n_hess_vec_.fetch_add(1, std::memory_order_relaxed);
  return eval_hess_vec(x, v);
}

double Objective::reduction(const Vector& x, const Vector& p) const {
  check(x, "reduction");
  check(p, "reduction");
  n_value_.fetch_add(1, std::memory_order_relaxed);
  return eval_reduction(x, p);
}

EvalCounts Objective::counts() const {
  return {n_value_.load(std::memory_order_relaxed), n_gradient_.load(std::memory_order_relaxed),
          n_hess_vec_.load(std::memory_order_relaxed)};
}

void Objective::reset_counts() {
  n_value_ = 0;
  n_gradient_ = 0;
  n_hess_vec_ = 0;
}

}  // namespace tltr
