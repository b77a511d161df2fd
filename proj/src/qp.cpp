#include "tltr/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace tltr {

QuadraticModel dense_model(double f0, Vector g, Matrix h, double radius) {
  QuadraticModel m;
  m.f0 = f0;
  m.g = std::move(g);
  m.h_vec = [h = std::move(h)](const Vector& v) -> Vector { return h * v; };
  m.radius = radius;
  return m;
}

namespace {

void check_model(const QuadraticModel& m) {
  if (!(m.radius > 0.0)) throw std::invalid_argument("trust-region radius must be positive");
  if (!m.h_vec) throw std::invalid_argument("quadratic model has no Hessian operator");
  if (m.g.size() == 0 || m.g.squaredNorm() == 0.0) throw ConvergedError();
}

// m(0) - m(p) given H p.
double decrease(const Vector& g, const Vector& p, const Vector& hp) {
  return -(g.dot(p) + 0.5 * p.dot(hp));
}

}  // namespace

QpStep cauchy_point(const QuadraticModel& m) {
  check_model(m);
  const double gnorm = m.g.norm();
  const Vector hg = m.h_vec(m.g);
  const double ghg = m.g.dot(hg);

  double tau = 1.0;
  if (ghg > 0.0) tau = std::min(gnorm * gnorm * gnorm / (m.radius * ghg), 1.0);

  const double scale = tau * m.radius / gnorm;
  QpStep step;
  step.p = -scale * m.g;
  step.model_decrease = decrease(m.g, step.p, -scale * hg);
  step.boundary_hit = tau == 1.0;
  step.iterations = 1;
  step.exit = step.boundary_hit ? QpExit::Boundary : QpExit::Interior;
  return step;
}

double boundary_tau(const Vector& p, const Vector& d, double radius) {
  const double a = d.squaredNorm();
  if (a == 0.0) throw std::invalid_argument("boundary_tau: zero direction");
  const double b = 2.0 * p.dot(d);
  const double c = p.squaredNorm() - radius * radius;
  const double disc = std::sqrt(std::max(b * b - 4.0 * a * c, 0.0));
  // Roots q/a and c/q; with c < 0 they straddle zero. Pick the positive one
  // without subtracting nearly equal numbers.
  if (b >= 0.0) {
    const double q = -0.5 * (b + disc);
    return q == 0.0 ? 0.0 : std::max(c / q, 0.0);
  }
  const double q = -0.5 * (b - disc);
  return q / a;
}

QpStep steihaug_toint(const QuadraticModel& m, double rtol, int max_iter) {
  check_model(m);
  if (max_iter < 1) throw std::invalid_argument("steihaug_toint: max_iter must be >= 1");

  const Eigen::Index n = m.g.size();
  const double stop = rtol * m.g.norm();
  Vector z = Vector::Zero(n);
  Vector hz = Vector::Zero(n);
  Vector r = m.g;
  Vector d = -r;
  double rr = r.squaredNorm();

  QpStep step;
  auto finish_on_boundary = [&](const Vector& bd, QpExit why) {
    const double tau = boundary_tau(z, d, m.radius);
    step.p = z + tau * d;
    const Vector hp = hz + tau * bd;
    step.model_decrease = decrease(m.g, step.p, hp);
    step.boundary_hit = true;
    step.exit = why;
    return step;
  };

  for (int it = 0; it < max_iter; ++it) {
    const Vector bd = m.h_vec(d);
    step.iterations = it + 1;
    const double dbd = d.dot(bd);
    if (dbd <= 0.0) return finish_on_boundary(bd, QpExit::NegativeCurvature);

    const double alpha = rr / dbd;
    const Vector z_next = z + alpha * d;
    if (z_next.norm() >= m.radius) return finish_on_boundary(bd, QpExit::Boundary);

    z = z_next;
    hz += alpha * bd;
    r += alpha * bd;
    const double rr_next = r.squaredNorm();
    if (std::sqrt(rr_next) <= stop) {
      step.exit = QpExit::Residual;
      break;
    }
    d = -r + (rr_next / rr) * d;
    rr = rr_next;
    step.exit = QpExit::IterationCap;
  }

  step.p = z;
  step.model_decrease = decrease(m.g, z, hz);
  return step;
}

// ------------------------------------------------------------ test oracle

namespace {

struct Best {
  Vector p;
  double value = std::numeric_limits<double>::infinity();
};

double model_value(const Vector& g, const Matrix& h, const Vector& p) {
  return g.dot(p) + 0.5 * p.dot(h * p);
}

Vector project(const Vector& p, double radius) {
  const double norm = p.norm();
  return norm > radius ? Vector(p * (radius / norm)) : p;
}

void consider(Best& best, const Vector& g, const Matrix& h, const Vector& p) {
  const double v = model_value(g, h, p);
  if (v < best.value) {
    best.value = v;
    best.p = p;
  }
}

}  // namespace

QpStep brute_force_tr(const Vector& g, const Matrix& h, double radius, int grid) {
  const Eigen::Index dim = g.size();
  if (dim < 1 || dim > 3) throw std::invalid_argument("brute_force_tr: dimension must be 1..3");
  if (h.rows() != dim || h.cols() != dim) throw std::invalid_argument("brute_force_tr: H shape");
  if (!(radius > 0.0)) throw std::invalid_argument("brute_force_tr: radius must be positive");
  if (grid < 2) throw std::invalid_argument("brute_force_tr: grid must be >= 2");

  Best best;
  best.p = Vector::Zero(dim);
  best.value = 0.0;

  // Cartesian grid clipped to the ball.
  Eigen::VectorXi idx = Eigen::VectorXi::Zero(dim);
  const double h_step = 2.0 * radius / (grid - 1);
  while (true) {
    Vector p(dim);
    for (Eigen::Index i = 0; i < dim; ++i) p[i] = -radius + h_step * idx[i];
    if (p.norm() <= radius) consider(best, g, h, p);
    Eigen::Index i = 0;
    while (i < dim && ++idx[i] == grid) idx[i++] = 0;
    if (i == dim) break;
  }

  // Boundary sphere.
  const double pi = std::numbers::pi;
  if (dim == 1) {
    consider(best, g, h, Vector::Constant(1, radius));
    consider(best, g, h, Vector::Constant(1, -radius));
  } else if (dim == 2) {
    const int k = 8 * grid;
    for (int a = 0; a < k; ++a) {
      const double t = 2.0 * pi * a / k;
      consider(best, g, h, Vector{{radius * std::cos(t), radius * std::sin(t)}});
    }
  } else {
    const int k = 4 * grid;
    for (int a = 0; a <= k; ++a) {
      const double theta = pi * a / k;
      for (int b = 0; b < 2 * k; ++b) {
        const double phi = pi * b / k;
        consider(best, g, h,
                 Vector{{radius * std::sin(theta) * std::cos(phi),
                         radius * std::sin(theta) * std::sin(phi), radius * std::cos(theta)}});
      }
    }
  }

  // Projected gradient polish from the best sample.
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (h + h.transpose()));
  const double lipschitz = std::max(eig.eigenvalues().cwiseAbs().maxCoeff(), 1e-12);
  Vector p = best.p;
  for (int it = 0; it < 200000; ++it) {
    const Vector next = project(p - (g + h * p) / lipschitz, radius);
    const double moved = (next - p).norm();
    p = next;
    if (moved <= 1e-17 * std::max(1.0, radius)) break;
  }
  consider(best, g, h, p);

  QpStep step;
  step.p = best.p;
  step.model_decrease = -best.value;
  step.boundary_hit = best.p.norm() >= radius * (1.0 - 1e-12);
  step.exit = step.boundary_hit ? QpExit::Boundary : QpExit::Interior;
  return step;
}

}  // namespace tltr
