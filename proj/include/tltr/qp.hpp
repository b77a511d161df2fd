#pragma once

#include <functional>
#include <stdexcept>

#include <Eigen/Core>

namespace tltr {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Thrown when a subproblem is posed with a zero model gradient.
class ConvergedError : public std::domain_error {
 public:
  ConvergedError() : std::domain_error("converged: model gradient is zero") {}
};

/// m(p) = f0 + <g, p> + 1/2 <p, H p> restricted to |p| <= radius.
struct QuadraticModel {
  double f0 = 0.0;
  Vector g;
  std::function<Vector(const Vector&)> h_vec;
  double radius = 1.0;

  double eval(const Vector& p) const { return f0 + g.dot(p) + 0.5 * p.dot(h_vec(p)); }
};

QuadraticModel dense_model(double f0, Vector g, Matrix h, double radius);

enum class QpExit { Interior, Residual, IterationCap, NegativeCurvature, Boundary };

struct QpStep {
  Vector p;
  double model_decrease = 0.0;  // m(0) - m(p)
  bool boundary_hit = false;
  int iterations = 0;
  QpExit exit = QpExit::Interior;
};

/// Minimizer of the model along -g inside the ball.
QpStep cauchy_point(const QuadraticModel& m);

/// Truncated conjugate gradients from p = 0. Stops when |r| <= rtol |g|,
/// after max_iter Hessian products, on nonpositive curvature, or when the
/// next iterate would leave the ball; the last two return the boundary point
/// along the current direction. The model decrease is nondecreasing across
/// iterations and the first iterate is the Cauchy point.
QpStep steihaug_toint(const QuadraticModel& m, double rtol, int max_iter);

/// tau >= 0 with |p + tau d| = radius, for |p| < radius and d != 0.
double boundary_tau(const Vector& p, const Vector& d, double radius);

/// Global minimizer over the ball for dimension <= 3 with explicit H: grid
/// over the ball and its boundary sphere followed by projected-gradient
/// polishing. Test oracle only; cost grows as grid^dim.
QpStep brute_force_tr(const Vector& g, const Matrix& h, double radius, int grid);

}  // namespace tltr
