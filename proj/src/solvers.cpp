#include "tltr/solvers.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Cholesky>

namespace tltr {

std::string to_string(FineSolver s) {
  return s == FineSolver::CauchyPoint ? "cp" : "stcg";
}

std::string to_string(Termination t) { return t == Termination::GradTol ? "GradTol" : "MaxIter"; }

void TrConfig::validate() const {
  if (!(delta0 > 0.0) || !(delta_max >= delta0)) {
    throw std::invalid_argument("TrConfig: need 0 < delta0 <= delta_max");
  }
  if (!(0.0 < eta1 && eta1 <= eta2 && eta2 < 1.0)) {
    throw std::invalid_argument("TrConfig: need 0 < eta1 <= eta2 < 1");
  }
  if (!(0.0 < gamma1 && gamma1 <= gamma2 && gamma2 < 1.0)) {
    throw std::invalid_argument("TrConfig: need 0 < gamma1 <= gamma2 < 1");
  }
  if (!(grow > 1.0)) throw std::invalid_argument("TrConfig: grow must exceed 1");
  if (!(grad_tol > 0.0)) throw std::invalid_argument("TrConfig: grad_tol must be positive");
  if (max_iter < 0) throw std::invalid_argument("TrConfig: max_iter must be >= 0");
  if (fine_solver == FineSolver::SteihaugToint && stcg_cap < 1) {
    throw std::invalid_argument("TrConfig: stcg_cap must be >= 1");
  }
  if (!(stcg_rtol >= 0.0)) throw std::invalid_argument("TrConfig: stcg_rtol must be >= 0");
}

void SubspaceConfig::validate(Eigen::Index n) const {
  if (!enabled) return;
  if (sketch.ell < 1) throw std::invalid_argument("SubspaceConfig: ell must be >= 1");
  if (sketch.ell > n) {
    throw std::invalid_argument("SubspaceConfig: ell=" + std::to_string(sketch.ell) +
                                " exceeds problem dimension n=" + std::to_string(n));
  }
  if (sketch.kind == SketchKind::SHashing) {
    const Eigen::Index s = sketch.s > 0 ? sketch.s : default_hash_nonzeros(sketch.ell);
    if (s > sketch.ell) {
      throw std::invalid_argument("SubspaceConfig: s=" + std::to_string(s) + " exceeds ell=" +
                                  std::to_string(sketch.ell));
    }
  }
  if (sketch.s < 0) throw std::invalid_argument("SubspaceConfig: s must be >= 0");
  if (alpha_max_backtracks < 0) {
    throw std::invalid_argument("SubspaceConfig: alpha_max_backtracks must be >= 0");
  }
  if (stcg_cap < 0) throw std::invalid_argument("SubspaceConfig: stcg_cap must be >= 0");
}

void SnConfig::validate() const {
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) throw std::invalid_argument("SnConfig: armijo_c in (0,1)");
  if (max_backtracks < 0) throw std::invalid_argument("SnConfig: max_backtracks must be >= 0");
  if (!(grad_tol > 0.0)) throw std::invalid_argument("SnConfig: grad_tol must be positive");
  if (max_iter < 0) throw std::invalid_argument("SnConfig: max_iter must be >= 0");
}

bool operator==(const IterationRecord& a, const IterationRecord& b) {
  auto same = [](double u, double v) { return u == v || (std::isnan(u) && std::isnan(v)); };
  return a.k == b.k && same(a.f, b.f) && same(a.grad_norm, b.grad_norm) && same(a.delta, b.delta) &&
         same(a.rho, b.rho) && same(a.rho_tr, b.rho_tr) && same(a.reduction, b.reduction) && a.accepted == b.accepted &&
         a.subspace_used == b.subspace_used && a.fallback == b.fallback && same(a.alpha, b.alpha) &&
         same(a.fine_step_norm, b.fine_step_norm) && same(a.sub_step_norm, b.sub_step_norm) &&
         a.evals == b.evals && a.sketches == b.sketches;
}

// ------------------------------------------------------------- primitives

double composite_rho(double f_k, double f_trial, double model_decrease, double f_half,
                     double f_after_sub) {
  constexpr double reject = -std::numeric_limits<double>::infinity();
  if (!std::isfinite(f_k) || !std::isfinite(f_trial) || !std::isfinite(model_decrease) ||
      !std::isfinite(f_half) || !std::isfinite(f_after_sub)) {
    return reject;
  }
  const double denominator = model_decrease + (f_half - f_after_sub);
  if (denominator < 1e-15 * std::max(1.0, std::abs(f_k))) return reject;
  return (f_k - f_trial) / denominator;
}

double reduction_ratio(double fine_reduction, double model_decrease, double sub_gain) {
  constexpr double reject = -std::numeric_limits<double>::infinity();
  if (!std::isfinite(fine_reduction) || !std::isfinite(model_decrease) ||
      !std::isfinite(sub_gain)) {
    return reject;
  }
  const double denominator = model_decrease + sub_gain;
  if (!(denominator > 0.0)) return reject;
  return (fine_reduction + sub_gain) / denominator;
}

double radius_update(double rho, double delta, const TrConfig& cfg) {
  if (rho >= cfg.eta2) return std::min(cfg.grow * delta, cfg.delta_max);
  if (rho >= cfg.eta1) return cfg.gamma2 * delta;
  return cfg.gamma1 * delta;
}

LineSearchResult line_search_alpha(const Objective& obj, const Vector& x, const Vector& d,
                                   int max_backtracks) {
  LineSearchResult result;
  double alpha = 1.0;
  for (int tries = 0; tries <= max_backtracks; ++tries, alpha *= 0.5) {
    const double gain = obj.reduction(x, alpha * d);
    if (gain > 0.0) {
      result.alpha = alpha;
      result.ok = true;
      result.gain = gain;
      return result;
    }
  }
  return result;
}

namespace {

struct StartPoint {
  Vector x;
  double f;
  Vector g;
  EvalCounts base;  // counters before the run; traces report counts relative to it
};

StartPoint start(const Objective& obj, const Vector& x0) {
  if (x0.size() != obj.dimension()) throw std::invalid_argument("x0 has the wrong dimension");
  if (!x0.allFinite()) throw std::invalid_argument("x0 is not finite");
  const EvalCounts base = obj.counts();
  const double f = obj.value(x0);
  StartPoint s{x0, f, obj.gradient(x0), base};
  if (!std::isfinite(s.f) || !s.g.allFinite()) {
    throw std::runtime_error("objective or gradient is not finite at x0");
  }
  return s;
}

// Repeated rejections must not drive the radius to zero; the subproblem
// solvers need radius > 0.
double next_radius(double rho, double delta, const TrConfig& cfg) {
  return std::max(radius_update(rho, delta, cfg), std::numeric_limits<double>::min());
}

QpStep fine_step(const Objective& obj, const Vector& x, double f, const Vector& g, double delta,
                 const TrConfig& cfg) {
  QuadraticModel model;
  model.f0 = f;
  model.g = g;
  model.h_vec = [&obj, &x](const Vector& v) { return obj.hess_vec(x, v); };
  model.radius = delta;
  if (cfg.fine_solver == FineSolver::CauchyPoint) return cauchy_point(model);
  return steihaug_toint(model, cfg.stcg_rtol, cfg.stcg_cap);
}

}  // namespace

// --------------------------------------------------------------------- TR

RunTrace tr_solve(const Objective& obj, const Vector& x0, const TrConfig& cfg) {
  cfg.validate();
  auto [x, f, g, base] = start(obj, x0);

  RunTrace trace;
  trace.solver = "tr";
  trace.initial_f = f;
  trace.initial_grad_norm = g.norm();

  double delta = cfg.delta0;
  double gnorm = trace.initial_grad_norm;
  for (int k = 0; k < cfg.max_iter && !(gnorm < cfg.grad_tol); ++k) {
    const QpStep step = fine_step(obj, x, f, g, delta, cfg);
    const double reduction = obj.reduction(x, step.p);
    const double rho = reduction_ratio(reduction, step.model_decrease, 0.0);

    IterationRecord rec;
    rec.k = k;
    rec.delta = delta;
    rec.rho = rho;
    rec.rho_tr = rho;
    rec.accepted = rho > cfg.eta1;
    rec.fine_step_norm = step.p.norm();
    if (rec.accepted) {
      rec.reduction = reduction;
      x += step.p;
      f -= reduction;
      g = obj.gradient(x);
      gnorm = g.norm();
    }
    delta = next_radius(rho, delta, cfg);
    rec.f = f;
    rec.grad_norm = gnorm;
    rec.evals = obj.counts() - base;
    trace.records.push_back(rec);
  }

  trace.terminated_by = gnorm < cfg.grad_tol ? Termination::GradTol : Termination::MaxIter;
  trace.final_x = x;
  trace.evals = obj.counts() - base;
  return trace;
}

// ------------------------------------------------------------------- TLTR

RunTrace tltr_solve(const Objective& obj, const Vector& x0, const TrConfig& cfg,
                    const SubspaceConfig& sub, std::uint64_t seed) {
  sub.validate(obj.dimension());
  SketchSource source;
  if (sub.enabled) source = make_sketch_source(sub.sketch, obj.dimension(), seed);
  RunTrace trace = tltr_solve(obj, x0, cfg, sub, source);
  trace.seed = seed;
  return trace;
}

RunTrace tltr_solve(const Objective& obj, const Vector& x0, const TrConfig& cfg,
                    const SubspaceConfig& sub, const SketchSource& sketches) {
  cfg.validate();
  sub.validate(obj.dimension());
  if (sub.enabled && !sketches) throw std::invalid_argument("tltr_solve: no sketch source");
  auto [x, f, g, base] = start(obj, x0);

  RunTrace trace;
  trace.solver = "tltr";
  trace.initial_f = f;
  trace.initial_grad_norm = g.norm();

  double delta = cfg.delta0;
  double gnorm = trace.initial_grad_norm;
  std::optional<SketchOperator> sketch;
  bool previous_rejected = false;

  for (int k = 0; k < cfg.max_iter && !(gnorm < cfg.grad_tol); ++k) {
    const QpStep smoothing = fine_step(obj, x, f, g, delta, cfg);
    const Vector x_half = x + smoothing.p;
    const double fine_reduction = obj.reduction(x, smoothing.p);
    const double f_half = f - fine_reduction;

    IterationRecord rec;
    rec.k = k;
    rec.delta = delta;
    rec.fine_step_norm = smoothing.p.norm();

    Vector x_trial = x_half;
    double sub_gain = 0.0;
    std::optional<Vector> g_half;

    if (sub.enabled && std::isfinite(fine_reduction)) {
      if (!sketch || sub.redraw_on_reject || !previous_rejected) {
        sketch = sketches(static_cast<std::uint64_t>(k));
        ++trace.sketches;
      }
      g_half = obj.gradient(x_half);
      const Vector g_sketch = sketch_gradient(*sketch, *g_half);
      if (g_sketch.squaredNorm() > 0.0) {
        const Eigen::Index ell = sketch->rows();
        const int cap = sub.stcg_cap > 0 ? sub.stcg_cap : static_cast<int>(ell);
        const QpStep reduced = steihaug_toint(
            dense_model(f_half, g_sketch, sketch_hessian(*sketch, obj, x_half), delta),
            sub.stcg_rtol, cap);
        const Vector direction = sketch->apply_transpose(reduced.p);
        const LineSearchResult ls =
            line_search_alpha(obj, x_half, direction, sub.alpha_max_backtracks);
        if (ls.ok) {
          rec.subspace_used = true;
          rec.alpha = ls.alpha;
          rec.sub_step_norm = reduced.p.norm();
          x_trial = x_half + ls.alpha * direction;
          sub_gain = ls.gain;
        }
      }
    }

    rec.rho = reduction_ratio(fine_reduction, smoothing.model_decrease, sub_gain);
    rec.rho_tr = reduction_ratio(fine_reduction, smoothing.model_decrease, 0.0);
    rec.accepted = rec.rho > cfg.eta1;
    previous_rejected = !rec.accepted;
    if (rec.accepted) {
      rec.reduction = fine_reduction + sub_gain;
      x = x_trial;
      f -= rec.reduction;
      g = (!rec.subspace_used && g_half) ? *g_half : obj.gradient(x);
      gnorm = g.norm();
    }
    delta = next_radius(rec.rho, delta, cfg);
    rec.f = f;
    rec.grad_norm = gnorm;
    rec.evals = obj.counts() - base;
    rec.sketches = trace.sketches;
    trace.records.push_back(rec);
  }

  trace.terminated_by = gnorm < cfg.grad_tol ? Termination::GradTol : Termination::MaxIter;
  trace.final_x = x;
  trace.evals = obj.counts() - base;
  return trace;
}

// --------------------------------------------------------------------- SN

RunTrace sn_solve(const Objective& obj, const Vector& x0, const SubspaceConfig& sub,
                  const SnConfig& cfg, std::uint64_t seed) {
  SubspaceConfig active = sub;
  active.enabled = true;
  active.validate(obj.dimension());
  RunTrace trace = sn_solve(obj, x0, cfg, make_sketch_source(sub.sketch, obj.dimension(), seed));
  trace.seed = seed;
  return trace;
}

RunTrace sn_solve(const Objective& obj, const Vector& x0, const SnConfig& cfg,
                  const SketchSource& sketches) {
  cfg.validate();
  if (!sketches) throw std::invalid_argument("sn_solve: no sketch source");
  auto [x, f, g, base] = start(obj, x0);

  RunTrace trace;
  trace.solver = "sn";
  trace.initial_f = f;
  trace.initial_grad_norm = g.norm();

  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  double gnorm = trace.initial_grad_norm;
  for (int k = 0; k < cfg.max_iter && !(gnorm < cfg.grad_tol); ++k) {
    const SketchOperator sketch = sketches(static_cast<std::uint64_t>(k));
    ++trace.sketches;
    if (sketch.cols() != obj.dimension()) throw std::invalid_argument("sn_solve: sketch width");

    IterationRecord rec;
    rec.k = k;
    rec.delta = nan;
    rec.rho = nan;
    rec.rho_tr = nan;
    rec.subspace_used = true;

    const Vector g_sketch = sketch_gradient(sketch, g);
    if (g_sketch.squaredNorm() > 0.0) {
      const Matrix h_sketch = sketch_hessian(sketch, obj, x);
      const Eigen::LDLT<Matrix> ldlt(h_sketch);
      Vector q;
      bool newton_ok = ldlt.info() == Eigen::Success;
      if (newton_ok) {
        const Vector pivots = ldlt.vectorD().cwiseAbs();
        const double tiny = static_cast<double>(pivots.size()) *
                            std::numeric_limits<double>::epsilon() * pivots.maxCoeff();
        newton_ok = pivots.minCoeff() > tiny;
      }
      if (newton_ok) {
        q = ldlt.solve(-g_sketch);
        newton_ok = q.allFinite();
      }
      Vector d;
      if (newton_ok) {
        d = sketch.apply_transpose(q);
        newton_ok = g.dot(d) < 0.0;
      }
      if (!newton_ok) {
        q = -g_sketch;
        d = sketch.apply_transpose(q);
        rec.fallback = true;
      }

      const double slope = g.dot(d);
      double alpha = 1.0;
      for (int b = 0; b <= cfg.max_backtracks; ++b, alpha *= 0.5) {
        const double reduction = obj.reduction(x, alpha * d);
        if (reduction >= -cfg.armijo_c * alpha * slope) {
          rec.accepted = true;
          rec.alpha = alpha;
          rec.reduction = reduction;
          rec.sub_step_norm = q.norm();
          x += alpha * d;
          f -= reduction;
          g = obj.gradient(x);
          gnorm = g.norm();
          break;
        }
      }
    }

    rec.f = f;
    rec.grad_norm = gnorm;
    rec.evals = obj.counts() - base;
    rec.sketches = trace.sketches;
    trace.records.push_back(rec);
  }

  trace.terminated_by = gnorm < cfg.grad_tol ? Termination::GradTol : Termination::MaxIter;
  trace.final_x = x;
  trace.evals = obj.counts() - base;
  return trace;
}

}  // namespace tltr
