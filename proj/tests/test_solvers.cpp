#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "support.hpp"
#include "tltr/experiment.hpp"
#include "tltr/losses.hpp"
#include "tltr/solvers.hpp"

using namespace tltr;

namespace {

QuadraticObjective half_norm(Eigen::Index n) {
  return QuadraticObjective(Matrix::Identity(n, n), Vector::Zero(n));
}

std::shared_ptr<const Dataset> synthetic(std::uint64_t seed = 1) {
  return std::make_shared<const Dataset>(make_synthetic({200, 20, 0.1, seed}));
}

SubspaceConfig gaussian_subspace(Eigen::Index ell) {
  SubspaceConfig sub;
  sub.sketch = {SketchKind::Gaussian, ell, 0};
  return sub;
}

void expect_monotone(const RunTrace& t) {
  double f = t.initial_f;
  for (const auto& r : t.records) {
    if (r.accepted) {
      EXPECT_GT(r.reduction, 0.0) << "k=" << r.k;
      EXPECT_LE(r.f, f) << "k=" << r.k;
    } else {
      EXPECT_EQ(r.f, f) << "k=" << r.k;
    }
    f = r.f;
  }
}

}  // namespace

TEST(RadiusUpdate, Bands) {
  TrConfig cfg;
  cfg.delta_max = 100;
  EXPECT_EQ(radius_update(0.9, 1.0, cfg), 2.0);
  EXPECT_EQ(radius_update(0.3, 1.0, cfg), 0.5);
  EXPECT_EQ(radius_update(0.01, 1.0, cfg), 0.25);
  EXPECT_EQ(radius_update(0.9, 80.0, cfg), 100.0);
  EXPECT_EQ(radius_update(-std::numeric_limits<double>::infinity(), 1.0, cfg), 0.25);
}

TEST(CompositeRho, Arithmetic) {
  EXPECT_NEAR(composite_rho(2, 1.2, 0.6, 1.5, 1.2), 0.8 / 0.9, 1e-15);
  EXPECT_DOUBLE_EQ(composite_rho(2, 1.5, 0.6, 1.5, 1.5), 0.5 / 0.6);
  EXPECT_EQ(composite_rho(2, 1.5, 0.0, 1.5, 1.5), -std::numeric_limits<double>::infinity());
  EXPECT_EQ(composite_rho(1e20, 1e20, 1e4, 1e20, 1e20), -std::numeric_limits<double>::infinity());
  EXPECT_EQ(composite_rho(NAN, 1, 1, 1, 1), -std::numeric_limits<double>::infinity());
}

TEST(CompositeRho, DominatesTrRatio) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> unit(0.01, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double model = unit(rng);
    const double actual = model * (2 * unit(rng) - 1.0);  // rho_tr in (-1, 1)
    const double gain = unit(rng);
    const double rho_tr = reduction_ratio(actual, model, 0.0);
    ASSERT_LT(rho_tr, 1.0);
    EXPECT_GT(reduction_ratio(actual, model, gain), rho_tr);
    EXPECT_GT(composite_rho(3.0, 3.0 - actual - gain, model, 3.0 - actual, 3.0 - actual - gain),
              rho_tr - 1e-12);
  }
}

TEST(ReductionRatio, Guards) {
  EXPECT_DOUBLE_EQ(reduction_ratio(0.8 - 0.3, 0.6, 0.3), composite_rho(2, 1.2, 0.6, 1.5, 1.2));
  EXPECT_EQ(reduction_ratio(1.0, 0.0, 0.0), -std::numeric_limits<double>::infinity());
  EXPECT_EQ(reduction_ratio(INFINITY, 1.0, 0.0), -std::numeric_limits<double>::infinity());
  EXPECT_EQ(reduction_ratio(1e-30, 1e-30, 0.0), 1.0);
}

TEST(LineSearch, DescentDirectionTakesFullStep) {
  auto f = half_norm(3);
  const Vector x = Vector::Ones(3);
  const LineSearchResult r = line_search_alpha(f, x, -0.1 * f.gradient(x), 5);
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.alpha, 1.0);
  EXPECT_NEAR(r.gain, f.value(x) - f.value(0.9 * x), 1e-15);
}

TEST(LineSearch, AscentDirectionFails) {
  auto f = half_norm(3);
  const Vector x = Vector::Ones(3);
  const EvalCounts before = f.counts();
  const LineSearchResult r = line_search_alpha(f, x, f.gradient(x), 5);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ((f.counts() - before).value, 6u);
}

TEST(LineSearch, OvershootBacktracks) {
  // f = x^2/2 from x = 1; d = -3 overshoots to -2. Halvings: -2 (worse),
  // -0.5 (better). 1-D arithmetic gives alpha = 1/2.
  auto f = half_norm(1);
  const LineSearchResult r = line_search_alpha(f, Vector::Ones(1), Vector::Constant(1, -3.0), 5);
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.alpha, 0.5);
  EXPECT_DOUBLE_EQ(r.gain, 0.5 - 0.125);
}

TEST(TrSolve, QuadraticConvergesFast) {
  auto f = half_norm(6);
  TrConfig cfg;
  cfg.delta0 = 100;
  cfg.stcg_cap = 1;
  const RunTrace t = tr_solve(f, Vector::Ones(6), cfg);
  EXPECT_EQ(t.terminated_by, Termination::GradTol);
  EXPECT_LE(t.iterations(), 3);
  EXPECT_LT(t.records.back().grad_norm, 1e-7);
  EXPECT_NEAR(t.records.front().rho, 1.0, 1e-12);
}

TEST(TrSolve, Rosenbrock) {
  testkit::Rosenbrock f;
  for (const FineSolver fine : {FineSolver::SteihaugToint, FineSolver::CauchyPoint}) {
    TrConfig cfg;
    cfg.fine_solver = fine;
    cfg.max_iter = 20000;
    const RunTrace t = tr_solve(f, (Vector(2) << -1.2, 1).finished(), cfg);
    EXPECT_EQ(t.terminated_by, Termination::GradTol) << to_string(fine);
    EXPECT_LT((t.final_x - Vector::Ones(2)).norm(), 1e-6) << to_string(fine);
    expect_monotone(t);
  }
}

TEST(TrSolve, ZeroIterations) {
  auto f = half_norm(2);
  TrConfig cfg;
  cfg.max_iter = 0;
  const RunTrace t = tr_solve(f, Vector::Ones(2), cfg);
  EXPECT_EQ(t.iterations(), 0);
  EXPECT_EQ(t.terminated_by, Termination::MaxIter);
  EXPECT_EQ(t.final_x, Vector::Ones(2));
}

TEST(TrSolve, AlreadyConverged) {
  auto f = half_norm(2);
  const RunTrace t = tr_solve(f, Vector::Zero(2), TrConfig{});
  EXPECT_EQ(t.iterations(), 0);
  EXPECT_EQ(t.terminated_by, Termination::GradTol);
}

TEST(TrSolve, BadStartingPoint) {
  auto f = half_norm(2);
  EXPECT_THROW(tr_solve(f, Vector::Constant(2, NAN), TrConfig{}), std::invalid_argument);
  EXPECT_THROW(tr_solve(f, Vector::Ones(3), TrConfig{}), std::invalid_argument);
  TrConfig bad;
  bad.eta1 = 0.9;
  bad.eta2 = 0.5;
  EXPECT_THROW(tr_solve(f, Vector::Ones(2), bad), std::invalid_argument);
}

TEST(TrSolve, RejectionsKeepRadiusPositive) {
  // A model that overstates curvature everywhere never predicts the step
  // well enough; the loop must still run to max_iter without throwing.
  class Liar final : public Objective {
   public:
    Liar() : Objective(1) {}

   protected:
    double eval_value(const Vector& x) const override { return -x[0]; }
    Vector eval_gradient(const Vector&) const override { return Vector::Constant(1, 1.0); }
    Vector eval_hess_vec(const Vector&, const Vector& v) const override { return -v; }
    double eval_reduction(const Vector&, const Vector&) const override { return -1.0; }
  } f;
  TrConfig cfg;
  cfg.max_iter = 2000;
  const RunTrace t = tr_solve(f, Vector::Zero(1), cfg);
  EXPECT_EQ(t.iterations(), 2000);
  EXPECT_GT(t.records.back().delta, 0.0);
}

TEST(TltrSolve, DisabledSubspaceEqualsTr) {
  auto data = synthetic(3);
  for (const FineSolver fine : {FineSolver::CauchyPoint, FineSolver::SteihaugToint}) {
    TrConfig cfg;
    cfg.fine_solver = fine;
    SubspaceConfig off;
    off.enabled = false;
    LogisticLoss f1(data), f2(data);
    const Vector x0 = initial_guess(20, 3);
    const RunTrace a = tr_solve(f1, x0, cfg);
    const RunTrace b = tltr_solve(f2, x0, cfg, off, 3);
    ASSERT_EQ(a.iterations(), b.iterations());
    for (int k = 0; k < a.iterations(); ++k) EXPECT_EQ(a.records[k], b.records[k]) << k;
    EXPECT_EQ(a.final_x, b.final_x);
    EXPECT_EQ(b.sketches, 0u);
  }
}

TEST(TltrSolve, ExactModelAcceptsAndGrows) {
  // On a quadratic the model is exact, so every ratio is 1 whatever the
  // subspace step contributes, and the radius doubles each iteration.
  Matrix a(3, 3);
  a << 4, 1, 0, 1, 3, 0, 0, 0, 2;
  QuadraticObjective f(a, (Vector(3) << 1, 2, 3).finished());
  TrConfig cfg;
  cfg.stcg_cap = 3;
  cfg.delta0 = 0.01;
  const RunTrace t = tltr_solve(f, Vector::Zero(3), cfg, gaussian_subspace(2), 1);
  ASSERT_GE(t.iterations(), 3);
  double delta = cfg.delta0;
  for (const auto& r : t.records) {
    EXPECT_TRUE(r.accepted);
    EXPECT_NEAR(r.rho, 1.0, 1e-9);
    EXPECT_NEAR(r.rho_tr, 1.0, 1e-9);
    EXPECT_EQ(r.delta, delta);
    delta *= 2.0;
  }
  EXPECT_EQ(t.terminated_by, Termination::GradTol);
}

TEST(TltrSolve, SubspaceEllTooLarge) {
  auto f = half_norm(4);
  EXPECT_THROW(tltr_solve(f, Vector::Ones(4), TrConfig{}, gaussian_subspace(5), 1),
               std::invalid_argument);
}

TEST(TltrSolve, ConvergesAndInvariantsHold) {
  auto data = synthetic(5);
  for (const FineSolver fine : {FineSolver::CauchyPoint, FineSolver::SteihaugToint}) {
    for (const SketchKind kind : {SketchKind::Gaussian, SketchKind::SHashing}) {
      TrConfig cfg;
      cfg.fine_solver = fine;
      SubspaceConfig sub = gaussian_subspace(6);
      sub.sketch.kind = kind;
      LogisticLoss f(data);
      const RunTrace t = tltr_solve(f, initial_guess(20, 5), cfg, sub, 5);
      EXPECT_EQ(t.terminated_by, Termination::GradTol);
      EXPECT_LT(t.records.back().grad_norm, cfg.grad_tol);
      expect_monotone(t);
      for (const auto& r : t.records) {
        EXPECT_LE(r.fine_step_norm, r.delta * (1 + 1e-12));
        EXPECT_LE(r.sub_step_norm, r.delta * (1 + 1e-12));
        if (r.subspace_used) {
          EXPECT_GT(r.alpha, 0.0);
          EXPECT_LE(r.alpha, 1.0);
          if (r.rho_tr < 1.0) EXPECT_GT(r.rho, r.rho_tr);
        }
      }
      EXPECT_EQ(t.evals, f.counts());
      EXPECT_EQ(t.sketches, static_cast<std::uint64_t>(t.iterations()));
    }
  }
}

TEST(TltrSolve, Deterministic) {
  auto data = synthetic(6);
  LogisticLoss f1(data), f2(data);
  const RunTrace a = tltr_solve(f1, initial_guess(20, 9), TrConfig{}, gaussian_subspace(5), 9);
  const RunTrace b = tltr_solve(f2, initial_guess(20, 9), TrConfig{}, gaussian_subspace(5), 9);
  ASSERT_EQ(a.iterations(), b.iterations());
  for (int k = 0; k < a.iterations(); ++k) EXPECT_EQ(a.records[k], b.records[k]);
}

TEST(TltrSolve, NoRedrawKeepsSketchAfterRejection) {
  auto data = synthetic(7);
  TrConfig cfg;
  cfg.delta0 = 50;  // force early rejections
  cfg.fine_solver = FineSolver::CauchyPoint;
  SubspaceConfig sub = gaussian_subspace(5);
  sub.redraw_on_reject = false;
  LogisticLoss f(data);
  const RunTrace t = tltr_solve(f, initial_guess(20, 7), cfg, sub, 7);
  int rejected = 0;
  for (const auto& r : t.records) rejected += !r.accepted;
  EXPECT_EQ(t.sketches, static_cast<std::uint64_t>(t.iterations() - rejected));
}

TEST(TltrSolve, LeastSquaresNonconvex) {
  auto raw = synthetic(8);
  auto data = std::make_shared<const Dataset>(map_labels(*raw, LabelConvention::ZeroOne));
  LeastSquaresLoss f(data);
  TrConfig cfg;
  cfg.max_iter = 3000;
  const RunTrace t = tltr_solve(f, initial_guess(20, 8), cfg, gaussian_subspace(6), 8);
  EXPECT_EQ(t.terminated_by, Termination::GradTol);
  expect_monotone(t);
}

TEST(SnSolve, ExactNewtonOnQuadratic) {
  Matrix a(3, 3);
  a << 4, 1, 0, 1, 3, 0.5, 0, 0.5, 2;
  QuadraticObjective f(a, (Vector(3) << 1, -2, 3).finished());
  const SketchSource identity = [](std::uint64_t) { return coordinate_sketch({0, 1, 2}, 3); };
  const RunTrace t = sn_solve(f, Vector::Ones(3), SnConfig{}, identity);
  ASSERT_EQ(t.iterations(), 1);
  EXPECT_EQ(t.records[0].alpha, 1.0);
  EXPECT_FALSE(t.records[0].fallback);
  EXPECT_EQ(t.terminated_by, Termination::GradTol);
  EXPECT_LT((t.final_x + a.ldlt().solve((Vector(3) << 1, -2, 3).finished())).norm(), 1e-12);

  SubspaceConfig coord;
  coord.sketch = {SketchKind::Coordinate, 3, 0};
  EXPECT_EQ(sn_solve(f, Vector::Ones(3), coord, SnConfig{}, 1).iterations(), 1);
}

TEST(SnSolve, SingularSketchFallsBack) {
  Matrix a(3, 3);
  a << 4, 1, 0, 1, 3, 0.5, 0, 0.5, 2;
  QuadraticObjective f(a, Vector::Zero(3));
  const SketchSource duplicate = [](std::uint64_t) { return coordinate_sketch({0, 0}, 3); };
  SnConfig cfg;
  cfg.max_iter = 3;
  const RunTrace t = sn_solve(f, Vector::Ones(3), cfg, duplicate);
  ASSERT_EQ(t.iterations(), 3);
  EXPECT_TRUE(t.records[0].fallback);
  EXPECT_TRUE(t.records[0].accepted);
  EXPECT_LT(t.records[0].f, t.initial_f);
}

TEST(SnSolve, LogisticGradientDecreases) {
  auto data = synthetic(9);
  LogisticLoss f(data);
  SubspaceConfig sub = gaussian_subspace(10);
  const RunTrace t = sn_solve(f, initial_guess(20, 9), sub, SnConfig{}, 9);
  EXPECT_EQ(t.terminated_by, Termination::GradTol);
  expect_monotone(t);
  int decreasing = 0;
  double g = t.initial_grad_norm;
  for (const auto& r : t.records) {
    decreasing += r.grad_norm < g;
    g = r.grad_norm;
    EXPECT_TRUE(std::isnan(r.delta));
  }
  EXPECT_GE(decreasing, 0.95 * t.iterations());
}

TEST(Configs, Validation) {
  TrConfig tr;
  tr.grad_tol = 0;
  EXPECT_THROW(tr.validate(), std::invalid_argument);
  tr = TrConfig{};
  tr.grow = 1.0;
  EXPECT_THROW(tr.validate(), std::invalid_argument);
  SubspaceConfig sub = gaussian_subspace(3);
  sub.sketch.kind = SketchKind::SHashing;
  sub.sketch.s = 4;
  EXPECT_THROW(sub.validate(10), std::invalid_argument);
  sub.sketch.s = 0;
  EXPECT_NO_THROW(sub.validate(10));
  SnConfig sn;
  sn.armijo_c = 1.0;
  EXPECT_THROW(sn.validate(), std::invalid_argument);
}
